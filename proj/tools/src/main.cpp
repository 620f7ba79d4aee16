#include "app.hpp"

int main(int argc, char** argv) { return odeco::cli::run(argc, argv); }
