#include "ballproj/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ballproj {

Polynomial::Polynomial(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
}

Polynomial::Polynomial(int dim, TermMap terms) : dim_(dim), terms_(std::move(terms)) {
    if (dim < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first.dim() != dim_) throw std::invalid_argument("Polynomial: term dimension mismatch");
        if (it->second == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Polynomial Polynomial::constant(int dim, const real& c) {
    Polynomial p(dim);
    p.add_term(MultiIndex::zero(dim), c);
    return p;
}

Polynomial Polynomial::monomial(const MultiIndex& gamma, const real& c) {
    Polynomial p(gamma.dim());
    p.add_term(gamma, c);
    return p;
}

int Polynomial::degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.order(); }

real Polynomial::coefficient(const MultiIndex& gamma) const {
    auto it = terms_.find(gamma);
    return it == terms_.end() ? real(0) : it->second;
}

const MultiIndex& Polynomial::leading_monomial() const {
    if (terms_.empty()) throw std::logic_error("Polynomial::leading_monomial: zero polynomial");
    return terms_.rbegin()->first;
}

void Polynomial::add_term(const MultiIndex& gamma, const real& c) {
    if (gamma.dim() != dim_) throw std::invalid_argument("Polynomial: term dimension mismatch");
    auto [it, inserted] = terms_.emplace(gamma, c);
    if (!inserted) it->second += c;
    if (it->second == 0) terms_.erase(it);
}

real Polynomial::eval(std::span<const real> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("Polynomial::eval: point dimension mismatch");
    // per-coordinate power tables up to the max exponent present
    std::vector<int> max_exp(static_cast<std::size_t>(dim_), 0);
    for (const auto& [gamma, c] : terms_)
        for (int i = 0; i < dim_; ++i) max_exp[static_cast<std::size_t>(i)] = std::max(max_exp[static_cast<std::size_t>(i)], gamma[i]);
    std::vector<std::vector<real>> pow(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
        auto& pi = pow[static_cast<std::size_t>(i)];
        pi.resize(static_cast<std::size_t>(max_exp[static_cast<std::size_t>(i)]) + 1);
        pi[0] = real(1);
        for (int e = 1; e <= max_exp[static_cast<std::size_t>(i)]; ++e) pi[static_cast<std::size_t>(e)] = pi[static_cast<std::size_t>(e - 1)] * x[static_cast<std::size_t>(i)];
    }
    real acc(0);
    for (const auto& [gamma, c] : terms_) {
        real term = c;
        for (int i = 0; i < dim_; ++i) term *= pow[static_cast<std::size_t>(i)][static_cast<std::size_t>(gamma[i])];
        acc += term;
    }
    return acc;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (dim_ != other.dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
    for (const auto& [gamma, c] : other.terms_) add_term(gamma, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    if (dim_ != other.dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
    for (const auto& [gamma, c] : other.terms_) add_term(gamma, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const real& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [gamma, v] : terms_) v *= c;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
    Polynomial out(a.dim_);
    for (const auto& [ga, ca] : a.terms_)
        for (const auto& [gb, cb] : b.terms_) out.add_term(ga.plus(gb), ca * cb);
    return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    for (; ia != a.terms_.end(); ++ia, ++ib) {
        if (!(ia->first == ib->first) || ia->second != ib->second) return false;
    }
    return true;
}

Polynomial Polynomial::shifted(const MultiIndex& gamma) const {
    Polynomial out(dim_);
    for (const auto& [g, c] : terms_) out.add_term(g.plus(gamma), c);
    return out;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        os << it->second.str(6, std::ios_base::fmtflags()) << "*x^" << it->first.str();
        first = false;
    }
    return os.str();
}

Polynomial partial(const Polynomial& p, int axis) {
    if (axis < 1 || axis > p.dim()) throw std::invalid_argument("partial: axis out of range");
    Polynomial out(p.dim());
    for (const auto& [gamma, c] : p.terms()) {
        const int e = gamma[axis - 1];
        if (e == 0) continue;
        out += Polynomial::monomial(gamma.lowered(axis), c * e);
    }
    return out;
}

Polynomial partial(const Polynomial& p, const MultiIndex& gamma) {
    if (gamma.dim() != p.dim()) throw std::invalid_argument("partial: multi-index dimension mismatch");
    Polynomial out = p;
    for (int axis = 1; axis <= p.dim(); ++axis)
        for (int rep = 0; rep < gamma[axis - 1]; ++rep) out = partial(out, axis);
    return out;
}

Polynomial multiply_omega(const Polynomial& p) {
    Polynomial out = p;
    for (int i = 1; i <= p.dim(); ++i) {
        MultiIndex sq = MultiIndex::unit(p.dim(), i).raised(i);  // x_i^2
        out -= p.shifted(sq);
    }
    return out;
}

Polynomial angular_derivative(const Polynomial& p, int i, int j) {
    if (p.dim() < 2) throw std::invalid_argument("angular_derivative: requires dimension >= 2");
    if (i < 1 || j <= i || j > p.dim()) throw std::invalid_argument("angular_derivative: need 1 <= i < j <= d");
    const Polynomial dj = partial(p, j);
    const Polynomial di = partial(p, i);
    return dj.shifted(MultiIndex::unit(p.dim(), i)) - di.shifted(MultiIndex::unit(p.dim(), j));
}

Polynomial raise(const Polynomial& p, double alpha, int axis) {
    if (alpha <= -1.0) throw std::invalid_argument("raise: requires alpha > -1");
    if (axis < 1 || axis > p.dim()) throw std::invalid_argument("raise: axis out of range");
    const Polynomial dp = partial(p, axis);
    Polynomial out = -multiply_omega(dp);
    out += p.shifted(MultiIndex::unit(p.dim(), axis)) * (2 * (real(alpha) + 1));
    return out;
}

Polynomial sturm_liouville(const Polynomial& p, double alpha) {
    if (alpha <= -1.0) throw std::invalid_argument("sturm_liouville: requires alpha > -1");
    const int d = p.dim();
    Polynomial laplacian(d);
    Polynomial x_dot_grad(d);
    for (int i = 1; i <= d; ++i) {
        const Polynomial di = partial(p, i);
        laplacian += partial(di, i);
        x_dot_grad += di.shifted(MultiIndex::unit(d, i));
    }
    Polynomial out = -multiply_omega(laplacian);
    out += x_dot_grad * (2 * (real(alpha) + 1));
    for (int i = 1; i <= d; ++i)
        for (int j = i + 1; j <= d; ++j) out -= angular_derivative(angular_derivative(p, i, j), i, j);
    return out;
}

std::vector<Polynomial> gradient(const Polynomial& p) {
    std::vector<Polynomial> g;
    g.reserve(static_cast<std::size_t>(p.dim()));
    for (int i = 1; i <= p.dim(); ++i) g.push_back(partial(p, i));
    return g;
}

std::string to_term_lines(const Polynomial& p) {
    std::ostringstream os;
    for (const auto& [gamma, c] : p.terms()) {
        for (int i = 0; i < p.dim(); ++i) os << gamma[i] << ' ';
        os << to_decimal_string(c) << '\n';
    }
    return os.str();
}

Polynomial polynomial_from_term_lines(int dim, const std::string& lines) {
    Polynomial::TermMap terms;
    std::istringstream is(lines);
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::vector<int> e(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) {
            if (!(ls >> e[static_cast<std::size_t>(i)]))
                throw std::invalid_argument("polynomial_from_term_lines: malformed exponents");
        }
        std::string coeff;
        if (!(ls >> coeff)) throw std::invalid_argument("polynomial_from_term_lines: missing coefficient");
        MultiIndex gamma(e);
        auto [it, inserted] = terms.emplace(gamma, real(coeff));
        if (!inserted) it->second += real(coeff);
    }
    return Polynomial(dim, std::move(terms));
}

}  // namespace ballproj
