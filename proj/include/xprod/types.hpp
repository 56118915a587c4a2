#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace xprod {

using Cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;

/// Numerical tolerances shared by all structural checks.
/// identity_tol guards algebraic identities (residual norms), psd_tol guards
/// positivity (smallest eigenvalues). Both must stay well below any quantity
/// the toolkit is asked to distinguish, hence the 1e-3 ceiling.
struct Tolerances {
  double identity_tol = 1e-9;
  double psd_tol = 1e-9;

  void validate() const {
    if (!(identity_tol >= 0.0) || !(psd_tol >= 0.0) || identity_tol >= 1e-3 ||
        psd_tol >= 1e-3) {
      throw std::invalid_argument("Tolerances: must be nonnegative and < 1e-3");
    }
  }
};

/// Outcome of a single structural or numerical check.
///
/// `witness` is the number the verdict rests on; its meaning depends on
/// `kind`: a residual passes when witness <= tolerance, a minimum eigenvalue
/// passes when witness >= -tolerance, and Info records a value with no
/// pass/fail semantics.
struct CheckResult {
  enum class Kind { Residual, MinEigenvalue, Info };

  std::string name;
  bool pass = false;
  double witness = 0.0;
  double tolerance = 0.0;
  Kind kind = Kind::Residual;
  std::string detail;

  static CheckResult residual(std::string name, double witness, double tol,
                              std::string detail = {}) {
    return CheckResult{std::move(name), witness <= tol, witness, tol,
                       Kind::Residual, std::move(detail)};
  }
  static CheckResult min_eigenvalue(std::string name, double witness,
                                    double tol, std::string detail = {}) {
    return CheckResult{std::move(name), witness >= -tol, witness, tol,
                       Kind::MinEigenvalue, std::move(detail)};
  }
  static CheckResult info(std::string name, double value,
                          std::string detail = {}) {
    return CheckResult{std::move(name), true,  value,
                       0.0,             Kind::Info, std::move(detail)};
  }
  static CheckResult failed(std::string name, double witness, double tol,
                            Kind kind, std::string detail = {}) {
    return CheckResult{std::move(name), false, witness, tol, kind,
                       std::move(detail)};
  }
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};
struct NotHermitian : Error {
  using Error::Error;
};
struct InvalidGroup : Error {
  using Error::Error;
};
struct InvalidElement : Error {
  using Error::Error;
};
struct WindowNotClosed : Error {
  using Error::Error;
};
struct InvalidAction : Error {
  using Error::Error;
};
struct NotUnital : Error {
  using Error::Error;
};
struct InternalError : Error {
  using Error::Error;
};
struct NotCentralPositive : Error {
  using Error::Error;
};
struct NotNormalized : Error {
  using Error::Error;
};
struct AmbiguousWindow : Error {
  using Error::Error;
};
struct NotInvariant : Error {
  using Error::Error;
};
struct NotUCP : Error {
  using Error::Error;
};
struct NotCP : Error {
  using Error::Error;
};
struct NotSubmodule : Error {
  using Error::Error;
};
struct StructureMissing : Error {
  using Error::Error;
};
struct IncompleteCertificate : Error {
  using Error::Error;
};

/// Config parse/validation failure; `pointer` is a JSON pointer to the
/// offending location.
struct ConfigError : Error {
  std::string pointer;
  ConfigError(std::string ptr, const std::string& what)
      : Error("config error at " + ptr + ": " + what), pointer(std::move(ptr)) {}
};

}  // namespace xprod
