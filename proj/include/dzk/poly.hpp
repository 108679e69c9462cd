#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "dzk/field.hpp"

namespace dzk {

// Univariate polynomial, coeffs[j] multiplies x^j.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Fe> coeffs) : coeffs_(std::move(coeffs)) {}

    static UniPoly zero(PrimeModulus q, std::size_t len) {
        return UniPoly(std::vector<Fe>(len, Fe(0, q)));
    }

    const std::vector<Fe>& coeffs() const { return coeffs_; }
    std::vector<Fe>& coeffs() { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }

    // Index of the last nonzero coefficient, -1 for the zero polynomial.
    int degree() const;

    Fe eval(Fe x) const;  // Horner

    // Pads (or rejects) to exactly n coefficients so that every node of an
    // n-node network holds one coefficient.
    UniPoly padded(std::size_t n) const;

private:
    std::vector<Fe> coeffs_;
};

// Unique degree-<=1 polynomial through (x1,y1), (x2,y2); x1 != x2.
UniPoly interpolate_deg1(Fe x1, Fe y1, Fe x2, Fe y2);

// Lagrange interpolation through distinct xs; returns coefficient form.
UniPoly interpolate(std::span<const Fe> xs, std::span<const Fe> ys);

// Multivariate polynomial as a monomial map, exponents stored per variable.
class SparsePoly {
public:
    using Expt = std::vector<uint8_t>;

    SparsePoly(int num_vars, PrimeModulus q) : num_vars_(num_vars), q_(q) {}

    int num_vars() const { return num_vars_; }
    PrimeModulus modulus() const { return q_; }
    const std::map<Expt, Fe>& monomials() const { return monomials_; }
    std::size_t monomial_count() const { return monomials_.size(); }

    int individual_degree() const;
    int total_degree() const;

    void add_monomial(const Expt& exps, Fe coeff);

    Fe eval(std::span<const Fe> point) const;

    SparsePoly operator+(const SparsePoly& o) const;
    SparsePoly operator*(const SparsePoly& o) const;
    SparsePoly scaled(Fe c) const;

    // Sums the trailing `count` variables over {0,1}, returning a polynomial
    // in the remaining leading variables.
    SparsePoly sum_suffix_cube(int count) const;

    // Substitutes values for the leading `vals.size()` variables.
    SparsePoly substitute_prefix(std::span<const Fe> vals) const;

    static SparsePoly constant(Fe c, int num_vars, PrimeModulus q);
    static SparsePoly variable(int index, int num_vars, PrimeModulus q);

private:
    int num_vars_;
    PrimeModulus q_;
    std::map<Expt, Fe> monomials_;
};

// Evaluation access to an N-variate polynomial with a declared individual
// degree bound. When `sparse` is set, honest provers use exact symbolic
// partial sums instead of hypercube enumeration.
struct PolyOracle {
    int num_vars = 0;
    int individual_degree = 0;
    PrimeModulus q;
    std::function<Fe(std::span<const Fe>)> eval;
    const SparsePoly* sparse = nullptr;
    // Optional fast path for sum over {0,1} of all variables beyond a
    // concrete prefix; falls back to hypercube enumeration.
    std::function<Fe(std::span<const Fe>)> suffix_sum;
};

// Sum of f over {0,1}^(num_vars - |prefix|) with the leading variables fixed.
Fe oracle_suffix_sum(const PolyOracle& f, std::span<const Fe> prefix);

PolyOracle make_oracle(const SparsePoly& p);

inline constexpr int kMaxHypercubeVars = 24;

// Exact sum over {0,1}^N. The independent oracle backing the acceptance
// tests; guarded so nobody sums a 2^30 cube by accident.
Fe hypercube_sum(const PolyOracle& f);
Fe hypercube_sum(const SparsePoly& p);

// Honest-prover round polynomial: g_i(x) summed over the trailing cube with
// the first i-1 variables fixed to `fixed`. 1-based variable index i.
UniPoly partial_sum_univariate(const PolyOracle& f, std::span<const Fe> fixed, int var_index);
UniPoly partial_sum_univariate(const SparsePoly& p, std::span<const Fe> fixed, int var_index);

// Boolean function given by its support, arity bits per point.
class BoolTable {
public:
    BoolTable(int arity, PrimeModulus q) : arity_(arity), q_(q) {}

    int arity() const { return arity_; }
    PrimeModulus modulus() const { return q_; }
    const std::vector<uint64_t>& entries() const { return entries_; }

    // `point` packs the coordinates big-endian: bit (arity-1-i) holds x_i.
    void set(uint64_t point);
    bool get(uint64_t point) const;

    // Multilinear-extension evaluation at a field point.
    Fe mle_eval(std::span<const Fe> point) const;

    // Full symbolic expansion (test oracle; exponential in arity).
    SparsePoly to_mle_poly() const;

private:
    int arity_;
    PrimeModulus q_;
    std::vector<uint64_t> entries_;  // sorted
};

// chi_point(bits): product over coordinates of (x_l z_l + (1-x_l)(1-z_l)).
Fe chi_at(std::span<const Fe> point, uint64_t bits);

// Random polynomial with the given shape; duplicate exponent draws collapse.
SparsePoly random_sparse_poly(int num_vars, int individual_degree, int monomials, PrimeModulus q,
                              uint64_t seed);

}  // namespace dzk
