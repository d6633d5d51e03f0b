// SPDX-License-Identifier: Apache-2.0

#ifndef HEATKERN_FIELDS_HPP
#define HEATKERN_FIELDS_HPP

#include <functional>
#include <vector>

#include "heatkern/types.hpp"

namespace heatkern {

// A matrix-valued coefficient field over a coordinate chart. Polynomial
// tables are the primary input format (exact jets); 1-d trigonometric
// tables cover periodic geometries; a callable hook admits anything else.
class MatrixField {
public:
  MatrixField() = default; // empty constant; assign before use

  struct PolyTerm {
    std::vector<int> exponents; // one exponent per coordinate
    CMatrix coeff;
  };
  struct TrigTerm {
    int harmonic = 0;   // wave number k in cos/sin(2 pi k x / length)
    bool is_sin = false;
    CMatrix coeff;
  };

  static MatrixField constant(int manifold_dim, const CMatrix &value);
  static MatrixField polynomial(int manifold_dim, int fiber_dim,
                                std::vector<PolyTerm> terms);
  // One-dimensional periodic field of period `length`.
  static MatrixField trig(double length, int fiber_dim,
                          std::vector<TrigTerm> terms);
  // Evaluation-only rule; no analytic derivatives.
  static MatrixField callable(int manifold_dim, int fiber_dim,
                              std::function<CMatrix(const RVector &)> rule);

  CMatrix eval(const RVector &x) const;
  CMatrix deriv(const RVector &x, int mu) const;
  CMatrix deriv2(const RVector &x, int mu, int nu) const;
  bool has_analytic_derivatives() const { return kind_ != Kind::callable_rule; }

  int manifold_dim() const { return manifold_dim_; }
  int fiber_dim() const { return fiber_dim_; }

  enum class Kind { constant_value, polynomial_table, trig_table, callable_rule };
  Kind kind() const { return kind_; }
  const CMatrix &constant_value() const { return constant_; }
  const std::vector<PolyTerm> &poly_terms() const { return poly_; }
  const std::vector<TrigTerm> &trig_terms() const { return trig_; }
  double trig_length() const { return length_; }

private:
  Kind kind_ = Kind::constant_value;
  int manifold_dim_ = 0;
  int fiber_dim_ = 0;
  CMatrix constant_;
  std::vector<PolyTerm> poly_;
  std::vector<TrigTerm> trig_;
  double length_ = 0.0;
  std::function<CMatrix(const RVector &)> rule_;
};

} // namespace heatkern

#endif
