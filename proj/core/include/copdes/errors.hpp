#pragma once

#include <stdexcept>
#include <string>

namespace copdes {

// Base of the library's exception hierarchy. Two broad categories matter to
// callers: validation errors (bad inputs, rejected at the API boundary) and
// numerical errors (well-formed inputs that the computation cannot handle).
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class validation_error : public error {
public:
  using error::error;
};

// Copula parameter outside its family domain, or a parameter requested from a
// family that has none.
class param_domain_error : public validation_error {
public:
  using validation_error::validation_error;
};

// Kendall's tau outside the range the family can attain.
class attainability_error : public validation_error {
public:
  using validation_error::validation_error;
};

// Density or partial evaluated on the boundary of the unit square, where
// several families diverge.
class boundary_error : public validation_error {
public:
  using validation_error::validation_error;
};

class numerical_error : public error {
public:
  using error::error;
};

// Non-finite integrand sample; carries the offending node.
class quadrature_error : public numerical_error {
public:
  quadrature_error(const std::string& what, double u1, double u2)
      : numerical_error(what), u1(u1), u2(u2) {}
  double u1, u2;
};

class singular_error : public numerical_error {
public:
  using numerical_error::numerical_error;
};

// Cell probability collapsed below the log-safety floor; carries the design
// point where it happened.
class degenerate_info_error : public numerical_error {
public:
  degenerate_info_error(const std::string& what, double x)
      : numerical_error(what), x(x) {}
  double x;
};

// Internal identity violated (e.g. Frechet bounds on cell probabilities);
// signals a bug in the copula evaluation, not bad user input.
class consistency_error : public numerical_error {
public:
  using numerical_error::numerical_error;
};

}  // namespace copdes
