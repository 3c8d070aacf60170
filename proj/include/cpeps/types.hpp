#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace cpeps {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<Cplx>;
using Triplet = Eigen::Triplet<Cplx>;

inline constexpr double kPi = 3.14159265358979323846;

// Invalid or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Memory / generator budget exceeded (CLI exit code 3).
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A numerical contract was violated at run time (CLI exit code 1).
struct ToleranceError : std::runtime_error {
  explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cpeps
