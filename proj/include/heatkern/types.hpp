// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_TYPES_HPP
#define HEATKERN_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace heatkern {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Error hierarchy. Every failure mode carries a human-readable message with
// the offending quantity; callers that can recover catch the specific type.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class DegeneracyError : public Error {
public:
  using Error::Error;
};

class BranchCutError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class EllipticityError : public Error {
public:
  using Error::Error;
};

class ContourError : public Error {
public:
  using Error::Error;
};

class IllConditionedError : public Error {
public:
  using Error::Error;
};

inline double max_abs(const CMatrix &m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// max|M - M^H|, the Hermiticity defect.
inline double hermiticity_defect(const CMatrix &m) {
  return max_abs(m - m.adjoint());
}

inline double antihermiticity_defect(const CMatrix &m) {
  return max_abs(m + m.adjoint());
}

inline bool is_finite(const CMatrix &m) {
  return m.allFinite();
}

// Throws ValidationError naming the max asymmetry if M is not Hermitian
// within tol*max(1, max|M|).
inline void require_hermitian(const CMatrix &m, double tol, const std::string &what) {
  const double defect = hermiticity_defect(m);
  const double scale = std::max(1.0, max_abs(m));
  if (defect > tol * scale) {
    throw ValidationError(what + ": matrix is not Hermitian, max|M - M^H| = " +
                          std::to_string(defect));
  }
}

inline void require_finite(const CMatrix &m, const std::string &what) {
  if (!is_finite(m)) {
    throw ValidationError(what + ": matrix has non-finite entries");
  }
}

} // namespace heatkern

#endif
