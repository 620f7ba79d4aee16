#include "odeco/fixtures.hpp"

namespace odeco {

OdecoTensor demo233_odeco() {
  TensorShape shape({2, 3, 3});
  Eigen::VectorXd sigmas = Eigen::VectorXd::Ones(2);
  std::vector<Eigen::MatrixXd> factors = {Eigen::MatrixXd::Identity(2, 2),
                                          Eigen::MatrixXd::Identity(3, 3),
                                          Eigen::MatrixXd::Identity(3, 3)};
  return OdecoTensor{std::move(shape), std::move(sigmas), std::move(factors)};
}

DenseTensor demo233_perturbation() {
  // slice i1 = 0, then i1 = 1; rows are i2, columns i3
  std::vector<double> entries = {
      0, 40, 10, 100, 3, 3, 3, 2, 6,  //
      7, 1,  1,  8,   0, 2, 2, 2, 3,
  };
  return DenseTensor(TensorShape({2, 3, 3}), std::move(entries));
}

}  // namespace odeco
