#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "crfuchs/scalar.hpp"

namespace crfuchs {

using VarsPtr = std::shared_ptr<const std::vector<std::string>>;

VarsPtr make_vars(std::vector<std::string> names);

constexpr int kInfOrder = 1 << 29;

/// Per-variable degree caps plus a total-degree cap. A jet is exact as a
/// function modulo the monomials allowed by its truncation.
struct Truncation {
    std::vector<int> var_caps;
    int total_cap = 0;

    static Truncation uniform(size_t nvars, int cap)
    {
        return {std::vector<int>(nvars, cap), static_cast<int>(nvars) * cap};
    }
    static Truncation of(std::vector<int> caps, int total)
    {
        return {std::move(caps), total};
    }

    bool admits(const std::vector<unsigned char>& e) const
    {
        int tot = 0;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] > var_caps[i]) return false;
            tot += e[i];
        }
        return tot <= total_cap;
    }

    Truncation min_with(const Truncation& o) const;
    bool operator==(const Truncation& o) const = default;
};

/// Truncated multivariate power series over Scalar coefficients, stored
/// sparsely in graded-lex order. Immutable value semantics: every operation
/// returns a new jet; results are canonical (no explicit zero coefficients,
/// every exponent within the truncation).
class Jet {
public:
    using Mono = std::vector<unsigned char>;

    struct GradedLess {
        bool operator()(const Mono& a, const Mono& b) const
        {
            int ta = std::accumulate(a.begin(), a.end(), 0);
            int tb = std::accumulate(b.begin(), b.end(), 0);
            if (ta != tb) return ta < tb;
            return a < b;
        }
    };
    using TermMap = std::map<Mono, Scalar, GradedLess>;

    Jet() = default;
    Jet(VarsPtr vars, Truncation trunc);

    static Jet zero(const VarsPtr& vars, const Truncation& t) { return Jet(vars, t); }
    static Jet constant(const VarsPtr& vars, const Truncation& t, const Scalar& c);
    static Jet variable(const VarsPtr& vars, const Truncation& t, int idx);
    static Jet monomial(const VarsPtr& vars, const Truncation& t, const Mono& e, const Scalar& c);

    const VarsPtr& vars() const { return vars_; }
    size_t nvars() const { return vars_ ? vars_->size() : 0; }
    const Truncation& trunc() const { return trunc_; }
    const TermMap& terms() const { return terms_; }
    size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    int var_index(const std::string& name) const;

    Scalar coeff(const Mono& e) const;
    /// Adds c at exponent e (truncating, canonicalizing).
    void add_term(const Mono& e, const Scalar& c);

    /// Minimal total degree among stored terms; kInfOrder when zero.
    int order() const;
    /// Minimal degree in one variable; kInfOrder when zero.
    int var_order(int idx) const;
    /// Maximal degree in one variable; -1 when zero.
    int var_degree(int idx) const;

    bool is_exact() const; // no float coefficients

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b) { return mul(a, b); }

    Jet scaled(const Scalar& c) const;
    Jet conjugated() const;

    Jet truncated(const Truncation& t) const;

    bool operator==(const Jet& o) const;
    bool operator!=(const Jet& o) const { return !(*this == o); }

    std::string str() const;

    friend Jet mul(const Jet& a, const Jet& b);
    friend Jet mul_serial(const Jet& a, const Jet& b);
    friend Jet mul_parallel(const Jet& a, const Jet& b);

private:
    void check_compat(const Jet& o) const;

    VarsPtr vars_;
    Truncation trunc_;
    TermMap terms_;
};

Jet mul(const Jet& a, const Jet& b);
Jet mul_serial(const Jet& a, const Jet& b);
Jet mul_parallel(const Jet& a, const Jet& b);

Jet pow_int(const Jet& a, long e);

/// Formal partial derivative; the cap in `var` (and the total cap) drop by one.
Jet derive(const Jet& a, int var);

/// Formal composition outer(inner_0, ..., inner_{n-1}). Every inner jet must
/// have zero constant term and they must share variables and truncation space.
Jet compose(const Jet& outer, const std::vector<Jet>& inners);

/// Composition without the zero-constant-term requirement: plain polynomial
/// evaluation of the stored terms. Constant parts must be nilpotent under the
/// coefficient truncation (e.g. capped formal parameters) for the result to
/// stay finite.
Jet compose_unchecked(const Jet& outer, const std::vector<Jet>& inners);

/// Substitutes `replacement` for variable `var` of `a`; other variables stay.
Jet subst_var(const Jet& a, int var, const Jet& replacement);

/// Multiplicative inverse of a jet whose constant term is a unit.
Jet reciprocal(const Jet& a);

/// exp of a jet with zero constant term.
Jet exp_trunc(const Jet& a);
/// log of a jet with constant term 1.
Jet log_trunc(const Jet& a);

/// Re-expresses `a` over a variable set that contains all of a's variables
/// (matched by name), with the given truncation.
Jet embed(const Jet& a, const VarsPtr& newvars, const Truncation& t);

/// Applies a permutation of the variable slots: result exponent at perm[i]
/// comes from a's exponent at i. Variable names follow the same slots.
Jet permute_vars(const Jet& a, const std::vector<int>& perm);

/// Extracts the coefficient jet of prod_i var_i^{fixed_i} over the remaining
/// variables.
Jet slice(const Jet& a, const std::vector<std::pair<int, int>>& fixed);

/// Exact division by var^k; throws if any stored term has lower degree.
Jet divide_by_var_power(const Jet& a, int var, int k);

/// Multiplication by var^k (truncating).
Jet shift_by_var_power(const Jet& a, int var, int k);

std::complex<double> eval(const Jet& a, const std::vector<std::complex<double>>& point);

/// Order read for float-mode jets: coefficients below rel_tol times the
/// largest magnitude count as zero.
int numeric_order(const Jet& a, double rel_tol);

/// Growth diagnostic sup_n |a_n|^{1/n} over the stored total degrees n >= 1;
/// staying bounded over computed orders is consistent with a positive radius
/// of convergence (reported, never asserted).
double coefficient_growth(const Jet& a);

} // namespace crfuchs
