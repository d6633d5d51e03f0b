// SPDX-License-Identifier: Apache-2.0

#include "heatkern/fields.hpp"

#include <cmath>

namespace heatkern {

MatrixField MatrixField::constant(int manifold_dim, const CMatrix &value) {
  MatrixField f;
  f.kind_ = Kind::constant_value;
  f.manifold_dim_ = manifold_dim;
  f.fiber_dim_ = static_cast<int>(value.rows());
  f.constant_ = value;
  return f;
}

MatrixField MatrixField::polynomial(int manifold_dim, int fiber_dim,
                                    std::vector<PolyTerm> terms) {
  MatrixField f;
  f.kind_ = Kind::polynomial_table;
  f.manifold_dim_ = manifold_dim;
  f.fiber_dim_ = fiber_dim;
  for (const PolyTerm &term : terms) {
    if (static_cast<int>(term.exponents.size()) != manifold_dim) {
      throw ConfigError("MatrixField::polynomial: exponent tuple length does "
                        "not match the manifold dimension");
    }
    if (term.coeff.rows() != fiber_dim || term.coeff.cols() != fiber_dim) {
      throw ConfigError("MatrixField::polynomial: coefficient matrix size does "
                        "not match the fiber dimension");
    }
  }
  f.poly_ = std::move(terms);
  return f;
}

MatrixField MatrixField::trig(double length, int fiber_dim,
                              std::vector<TrigTerm> terms) {
  if (length <= 0.0) {
    throw ConfigError("MatrixField::trig: period must be positive");
  }
  MatrixField f;
  f.kind_ = Kind::trig_table;
  f.manifold_dim_ = 1;
  f.fiber_dim_ = fiber_dim;
  f.length_ = length;
  f.trig_ = std::move(terms);
  return f;
}

MatrixField MatrixField::callable(int manifold_dim, int fiber_dim,
                                  std::function<CMatrix(const RVector &)> rule) {
  MatrixField f;
  f.kind_ = Kind::callable_rule;
  f.manifold_dim_ = manifold_dim;
  f.fiber_dim_ = fiber_dim;
  f.rule_ = std::move(rule);
  return f;
}

CMatrix MatrixField::eval(const RVector &x) const {
  switch (kind_) {
  case Kind::constant_value:
    return constant_;
  case Kind::polynomial_table: {
    CMatrix out = CMatrix::Zero(fiber_dim_, fiber_dim_);
    for (const PolyTerm &term : poly_) {
      double mono = 1.0;
      for (int mu = 0; mu < manifold_dim_; ++mu) {
        mono *= std::pow(x(mu), term.exponents[mu]);
      }
      out += mono * term.coeff;
    }
    return out;
  }
  case Kind::trig_table: {
    CMatrix out = CMatrix::Zero(fiber_dim_, fiber_dim_);
    const double freq = 2.0 * M_PI / length_;
    for (const TrigTerm &term : trig_) {
      const double phase = freq * term.harmonic * x(0);
      out += (term.is_sin ? std::sin(phase) : std::cos(phase)) * term.coeff;
    }
    return out;
  }
  case Kind::callable_rule:
    return rule_(x);
  }
  throw Error("MatrixField::eval: unreachable");
}

CMatrix MatrixField::deriv(const RVector &x, int mu) const {
  switch (kind_) {
  case Kind::constant_value:
    return CMatrix::Zero(fiber_dim_, fiber_dim_);
  case Kind::polynomial_table: {
    CMatrix out = CMatrix::Zero(fiber_dim_, fiber_dim_);
    for (const PolyTerm &term : poly_) {
      const int e = term.exponents[mu];
      if (e == 0) {
        continue;
      }
      double mono = e;
      for (int nu = 0; nu < manifold_dim_; ++nu) {
        const int p = term.exponents[nu] - (nu == mu ? 1 : 0);
        mono *= std::pow(x(nu), p);
      }
      out += mono * term.coeff;
    }
    return out;
  }
  case Kind::trig_table: {
    CMatrix out = CMatrix::Zero(fiber_dim_, fiber_dim_);
    const double freq = 2.0 * M_PI / length_;
    for (const TrigTerm &term : trig_) {
      const double k = freq * term.harmonic;
      const double phase = k * x(0);
      out += (term.is_sin ? k * std::cos(phase) : -k * std::sin(phase)) *
             term.coeff;
    }
    return out;
  }
  case Kind::callable_rule:
    throw ConfigError("MatrixField::deriv: no analytic derivative rule for a "
                      "callable field");
  }
  throw Error("MatrixField::deriv: unreachable");
}

CMatrix MatrixField::deriv2(const RVector &x, int mu, int nu) const {
  switch (kind_) {
  case Kind::constant_value:
    return CMatrix::Zero(fiber_dim_, fiber_dim_);
  case Kind::polynomial_table: {
    CMatrix out = CMatrix::Zero(fiber_dim_, fiber_dim_);
    for (const PolyTerm &term : poly_) {
      std::vector<int> exps = term.exponents;
      double factor = exps[mu];
      if (factor == 0.0) {
        continue;
      }
      exps[mu] -= 1;
      factor *= exps[nu];
      if (factor == 0.0) {
        continue;
      }
      exps[nu] -= 1;
      double mono = factor;
      for (int a = 0; a < manifold_dim_; ++a) {
        mono *= std::pow(x(a), exps[a]);
      }
      out += mono * term.coeff;
    }
    return out;
  }
  case Kind::trig_table: {
    CMatrix out = CMatrix::Zero(fiber_dim_, fiber_dim_);
    const double freq = 2.0 * M_PI / length_;
    for (const TrigTerm &term : trig_) {
      const double k = freq * term.harmonic;
      const double phase = k * x(0);
      out += (term.is_sin ? -k * k * std::sin(phase) : -k * k * std::cos(phase)) *
             term.coeff;
    }
    return out;
  }
  case Kind::callable_rule:
    throw ConfigError("MatrixField::deriv2: no analytic derivative rule for a "
                      "callable field");
  }
  throw Error("MatrixField::deriv2: unreachable");
}

} // namespace heatkern
