#include "dzk/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace dzk {

int UniPoly::degree() const {
    for (int j = static_cast<int>(coeffs_.size()) - 1; j >= 0; --j)
        if (!coeffs_[j].is_zero()) return j;
    return -1;
}

Fe UniPoly::eval(Fe x) const {
    if (coeffs_.empty()) throw std::invalid_argument("empty polynomial");
    Fe acc(0, x.q);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        check_same_field(*it, x);
        acc = acc * x + *it;
    }
    return acc;
}

UniPoly UniPoly::padded(std::size_t n) const {
    if (static_cast<std::size_t>(degree() + 1) > n)
        throw std::invalid_argument("polynomial degree exceeds node count");
    std::vector<Fe> out = coeffs_;
    PrimeModulus q = coeffs_.empty() ? PrimeModulus() : coeffs_.front().modulus();
    out.resize(n, Fe(0, q));
    return UniPoly(std::move(out));
}

UniPoly interpolate_deg1(Fe x1, Fe y1, Fe x2, Fe y2) {
    if (x1 == x2) throw std::invalid_argument("interpolate_deg1 needs distinct points");
    Fe slope = (y2 - y1) / (x2 - x1);
    Fe intercept = y1 - slope * x1;
    return UniPoly({intercept, slope});
}

UniPoly interpolate(std::span<const Fe> xs, std::span<const Fe> ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("interpolate: mismatched points");
    const PrimeModulus q = xs[0].modulus();
    const std::size_t n = xs.size();
    std::vector<Fe> coeffs(n, Fe(0, q));
    // Sum of Lagrange basis polynomials in coefficient form.
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Fe> basis{Fe(1, q)};
        Fe denom(1, q);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            // basis *= (x - xs[j])
            std::vector<Fe> next(basis.size() + 1, Fe(0, q));
            for (std::size_t d = 0; d < basis.size(); ++d) {
                next[d + 1] += basis[d];
                next[d] -= basis[d] * xs[j];
            }
            basis = std::move(next);
            denom *= xs[i] - xs[j];
        }
        Fe w = ys[i] / denom;
        for (std::size_t d = 0; d < basis.size(); ++d) coeffs[d] += basis[d] * w;
    }
    return UniPoly(std::move(coeffs));
}

int SparsePoly::individual_degree() const {
    int d = 0;
    for (const auto& [e, c] : monomials_)
        for (uint8_t x : e) d = std::max<int>(d, x);
    return d;
}

int SparsePoly::total_degree() const {
    int d = 0;
    for (const auto& [e, c] : monomials_) {
        int t = 0;
        for (uint8_t x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

void SparsePoly::add_monomial(const Expt& exps, Fe coeff) {
    if (static_cast<int>(exps.size()) != num_vars_)
        throw std::invalid_argument("exponent vector arity mismatch");
    check_same_field(coeff, Fe(0, q_));
    auto it = monomials_.find(exps);
    if (it == monomials_.end()) {
        if (!coeff.is_zero()) monomials_.emplace(exps, coeff);
        return;
    }
    it->second += coeff;
    if (it->second.is_zero()) monomials_.erase(it);
}

Fe SparsePoly::eval(std::span<const Fe> point) const {
    if (static_cast<int>(point.size()) != num_vars_)
        throw std::invalid_argument("eval point arity mismatch");
    Fe acc(0, q_);
    for (const auto& [e, c] : monomials_) {
        Fe term = c;
        for (int i = 0; i < num_vars_; ++i) {
            if (e[i] == 0) continue;
            check_same_field(point[i], term);
            term *= fe_pow(point[i], e[i]);
        }
        acc += term;
    }
    return acc;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
    if (o.num_vars_ != num_vars_ || o.q_ != q_)
        throw std::invalid_argument("polynomial shape mismatch");
    SparsePoly out = *this;
    for (const auto& [e, c] : o.monomials_) out.add_monomial(e, c);
    return out;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
    if (o.num_vars_ != num_vars_ || o.q_ != q_)
        throw std::invalid_argument("polynomial shape mismatch");
    SparsePoly out(num_vars_, q_);
    for (const auto& [ea, ca] : monomials_) {
        for (const auto& [eb, cb] : o.monomials_) {
            Expt e(num_vars_);
            for (int i = 0; i < num_vars_; ++i) {
                int s = ea[i] + eb[i];
                if (s > 255) throw std::overflow_error("exponent exceeds u8");
                e[i] = static_cast<uint8_t>(s);
            }
            out.add_monomial(e, ca * cb);
        }
    }
    return out;
}

SparsePoly SparsePoly::scaled(Fe c) const {
    SparsePoly out(num_vars_, q_);
    for (const auto& [e, v] : monomials_) out.add_monomial(e, v * c);
    return out;
}

SparsePoly SparsePoly::sum_suffix_cube(int count) const {
    if (count < 0 || count > num_vars_) throw std::invalid_argument("bad suffix count");
    const int keep = num_vars_ - count;
    SparsePoly out(keep, q_);
    for (const auto& [e, c] : monomials_) {
        // Sum of x^k over {0,1} is 2 when k = 0, else 1.
        uint64_t zeros = 0;
        for (int i = keep; i < num_vars_; ++i)
            if (e[i] == 0) ++zeros;
        Fe factor = fe_pow(Fe(2, q_), zeros);
        out.add_monomial(Expt(e.begin(), e.begin() + keep), c * factor);
    }
    return out;
}

SparsePoly SparsePoly::substitute_prefix(std::span<const Fe> vals) const {
    const int cut = static_cast<int>(vals.size());
    if (cut > num_vars_) throw std::invalid_argument("too many substituted values");
    SparsePoly out(num_vars_ - cut, q_);
    for (const auto& [e, c] : monomials_) {
        Fe coeff = c;
        for (int i = 0; i < cut; ++i)
            if (e[i] != 0) coeff *= fe_pow(vals[i], e[i]);
        out.add_monomial(Expt(e.begin() + cut, e.end()), coeff);
    }
    return out;
}

SparsePoly SparsePoly::constant(Fe c, int num_vars, PrimeModulus q) {
    SparsePoly p(num_vars, q);
    p.add_monomial(Expt(num_vars, 0), c);
    return p;
}

SparsePoly SparsePoly::variable(int index, int num_vars, PrimeModulus q) {
    SparsePoly p(num_vars, q);
    Expt e(num_vars, 0);
    e.at(index) = 1;
    p.add_monomial(e, Fe(1, q));
    return p;
}

PolyOracle make_oracle(const SparsePoly& p) {
    PolyOracle o;
    o.num_vars = p.num_vars();
    o.individual_degree = p.individual_degree();
    o.q = p.modulus();
    o.eval = [&p](std::span<const Fe> pt) { return p.eval(pt); };
    o.sparse = &p;
    return o;
}

namespace {

void check_cube(int vars) {
    if (vars > kMaxHypercubeVars) throw std::invalid_argument("hypercube too large to enumerate");
}

}  // namespace

Fe oracle_suffix_sum(const PolyOracle& f, std::span<const Fe> prefix) {
    const int tail = f.num_vars - static_cast<int>(prefix.size());
    if (tail < 0) throw std::invalid_argument("prefix longer than the variable count");
    if (f.suffix_sum) return f.suffix_sum(prefix);
    if (f.sparse) return f.sparse->substitute_prefix(prefix).sum_suffix_cube(tail).eval({});
    check_cube(tail);
    const PrimeModulus q = f.q;
    std::vector<Fe> pt(f.num_vars, Fe(0, q));
    std::copy(prefix.begin(), prefix.end(), pt.begin());
    Fe acc(0, q);
    for (uint64_t mask = 0; mask < (1ull << tail); ++mask) {
        for (int i = 0; i < tail; ++i) pt[prefix.size() + i] = Fe((mask >> i) & 1, q);
        acc += f.eval(pt);
    }
    return acc;
}

Fe hypercube_sum(const PolyOracle& f) {
    if (f.sparse) return hypercube_sum(*f.sparse);
    check_cube(f.num_vars);
    const PrimeModulus q = f.q;
    std::vector<Fe> pt(f.num_vars, Fe(0, q));
    Fe acc(0, q);
    for (uint64_t mask = 0; mask < (1ull << f.num_vars); ++mask) {
        for (int i = 0; i < f.num_vars; ++i) pt[i] = Fe((mask >> i) & 1, q);
        acc += f.eval(pt);
    }
    return acc;
}

Fe hypercube_sum(const SparsePoly& p) {
    check_cube(p.num_vars());
    return p.sum_suffix_cube(p.num_vars()).eval({});
}

UniPoly partial_sum_univariate(const PolyOracle& f, std::span<const Fe> fixed, int var_index) {
    if (f.sparse) return partial_sum_univariate(*f.sparse, fixed, var_index);
    if (var_index < 1 || var_index > f.num_vars) throw std::invalid_argument("round index out of range");
    if (static_cast<int>(fixed.size()) != var_index - 1)
        throw std::invalid_argument("fixed prefix length mismatch");
    const int tail = f.num_vars - var_index;
    check_cube(tail);
    const PrimeModulus q = f.q;
    const int d = f.individual_degree;
    std::vector<Fe> pt(f.num_vars, Fe(0, q));
    std::copy(fixed.begin(), fixed.end(), pt.begin());
    // d+1 sample values pin the degree-<=d polynomial exactly.
    std::vector<Fe> xs, ys;
    for (int s = 0; s <= d; ++s) {
        pt[var_index - 1] = Fe(static_cast<uint64_t>(s), q);
        Fe acc(0, q);
        for (uint64_t mask = 0; mask < (1ull << tail); ++mask) {
            for (int i = 0; i < tail; ++i) pt[var_index + i] = Fe((mask >> i) & 1, q);
            acc += f.eval(pt);
        }
        xs.push_back(pt[var_index - 1]);
        ys.push_back(acc);
    }
    return interpolate(xs, ys);
}

UniPoly partial_sum_univariate(const SparsePoly& p, std::span<const Fe> fixed, int var_index) {
    if (var_index < 1 || var_index > p.num_vars()) throw std::invalid_argument("round index out of range");
    if (static_cast<int>(fixed.size()) != var_index - 1)
        throw std::invalid_argument("fixed prefix length mismatch");
    const PrimeModulus q = p.modulus();
    std::vector<Fe> coeffs(static_cast<std::size_t>(p.individual_degree()) + 1, Fe(0, q));
    for (const auto& [e, c] : p.monomials()) {
        Fe term = c;
        for (int i = 0; i < var_index - 1; ++i)
            if (e[i] != 0) term *= fe_pow(fixed[i], e[i]);
        uint64_t zeros = 0;
        for (int i = var_index; i < p.num_vars(); ++i)
            if (e[i] == 0) ++zeros;
        term *= fe_pow(Fe(2, q), zeros);
        coeffs[e[var_index - 1]] += term;
    }
    return UniPoly(std::move(coeffs));
}

void BoolTable::set(uint64_t point) {
    if (arity_ < 64 && point >= (1ull << arity_))
        throw std::invalid_argument("point exceeds table arity");
    auto it = std::lower_bound(entries_.begin(), entries_.end(), point);
    if (it == entries_.end() || *it != point) entries_.insert(it, point);
}

bool BoolTable::get(uint64_t point) const {
    return std::binary_search(entries_.begin(), entries_.end(), point);
}

Fe chi_at(std::span<const Fe> point, uint64_t bits) {
    const int arity = static_cast<int>(point.size());
    PrimeModulus q = point[0].modulus();
    Fe one(1, q);
    Fe acc = one;
    for (int i = 0; i < arity; ++i) {
        // Coordinate i is stored in bit (arity-1-i): big-endian packing.
        bool z = (bits >> (arity - 1 - i)) & 1;
        acc *= z ? point[i] : one - point[i];
        if (acc.is_zero()) return acc;
    }
    return acc;
}

Fe BoolTable::mle_eval(std::span<const Fe> point) const {
    if (static_cast<int>(point.size()) != arity_)
        throw std::invalid_argument("mle point arity mismatch");
    Fe acc(0, q_);
    for (uint64_t bits : entries_) acc += chi_at(point, bits);
    return acc;
}

SparsePoly random_sparse_poly(int num_vars, int individual_degree, int monomials, PrimeModulus q,
                              uint64_t seed) {
    Rng rng(seed);
    SparsePoly p(num_vars, q);
    for (int i = 0; i < monomials; ++i) {
        SparsePoly::Expt e(num_vars);
        for (auto& x : e)
            x = static_cast<uint8_t>(rng.below(static_cast<uint64_t>(individual_degree) + 1));
        Fe c = fe_uniform(rng, q);
        if (c.is_zero()) c = Fe(1, q);
        p.add_monomial(e, c);
    }
    return p;
}

SparsePoly BoolTable::to_mle_poly() const {
    SparsePoly out(arity_, q_);
    Fe one(1, q_);
    for (uint64_t bits : entries_) {
        SparsePoly term = SparsePoly::constant(one, arity_, q_);
        for (int i = 0; i < arity_; ++i) {
            bool z = (bits >> (arity_ - 1 - i)) & 1;
            SparsePoly x = SparsePoly::variable(i, arity_, q_);
            if (z) {
                term = term * x;
            } else {
                term = term * (SparsePoly::constant(one, arity_, q_) + x.scaled(Fe(q_.q - 1, q_)));
            }
        }
        out = out + term;
    }
    return out;
}

}  // namespace dzk
