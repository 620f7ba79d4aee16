#pragma once

namespace odeco::cli {

int run(int argc, char** argv);

}  // namespace odeco::cli
