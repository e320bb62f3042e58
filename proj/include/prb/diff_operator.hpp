#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prb/poly.hpp"
#include "prb/rational.hpp"

namespace prb {

/// Differential operator sum_t a^[t](z) theta^t with theta = z d/dz,
/// coefficients on the left (theta z = z (theta + 1)).
class DiffOperatorTheta {
  public:
    DiffOperatorTheta() = default;
    explicit DiffOperatorTheta(std::vector<Poly> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    bool is_zero() const { return coeffs_.empty(); }
    long order() const { return static_cast<long>(coeffs_.size()) - 1; }
    const std::vector<Poly>& coeffs() const { return coeffs_; }
    Poly coeff(std::size_t t) const { return t < coeffs_.size() ? coeffs_[t] : Poly(); }
    const Poly& leading() const {
        if (is_zero()) throw std::domain_error("zero operator");
        return coeffs_.back();
    }

    bool operator==(const DiffOperatorTheta& o) const { return coeffs_ == o.coeffs_; }

    DiffOperatorTheta operator+(const DiffOperatorTheta& o) const {
        std::vector<Poly> v(std::max(coeffs_.size(), o.coeffs_.size()));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeff(i) + o.coeff(i);
        return DiffOperatorTheta(std::move(v));
    }

    /// Apply to a truncated power series; entry m of the result is exact for
    /// m < u.size() since theta and multiplication by z never look ahead.
    template <typename Coeff>
    std::vector<Coeff> apply_truncated(const std::vector<Coeff>& u) const {
        std::vector<Coeff> out(u.size());
        for (std::size_t t = 0; t < coeffs_.size(); ++t) {
            const Poly& a = coeffs_[t];
            for (long j = 0; j <= a.degree(); ++j) {
                Rational aj = a.coeff(static_cast<std::size_t>(j));
                if (aj == 0) continue;
                for (std::size_t m = static_cast<std::size_t>(j); m < u.size(); ++m) {
                    // coefficient of z^m in a_j z^j theta^t u: a_j (m-j)^t u_{m-j}
                    Rational f = aj;
                    for (std::size_t e = 0; e < t; ++e) f *= Rational(static_cast<long>(m) - j);
                    out[m] = out[m] + u[m - static_cast<std::size_t>(j)] * f;
                }
            }
        }
        return out;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (long t = order(); t >= 0; --t) {
            const Poly& c = coeffs_[static_cast<std::size_t>(t)];
            if (c.is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c.to_string("z") + ")";
            if (t > 0) s += "*theta^" + std::to_string(t);
        }
        return s;
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }

    std::vector<Poly> coeffs_;
};

}  // namespace prb
