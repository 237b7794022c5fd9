#include "ballproj/multi_index.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ballproj {

MultiIndex::MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
    if (e_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
    for (int v : e_) {
        if (v < 0) throw std::invalid_argument("MultiIndex: exponents must be nonnegative");
    }
    order_ = std::accumulate(e_.begin(), e_.end(), 0);
}

MultiIndex MultiIndex::zero(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)); }

MultiIndex MultiIndex::unit(int dim, int axis) {
    if (axis < 1 || axis > dim) throw std::invalid_argument("MultiIndex::unit: axis out of range");
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    e[static_cast<std::size_t>(axis - 1)] = 1;
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::plus(const MultiIndex& other) const {
    if (dim() != other.dim()) throw std::invalid_argument("MultiIndex::plus: dimension mismatch");
    std::vector<int> e(e_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.e_[i];
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::lowered(int axis) const {
    if (axis < 1 || axis > dim()) throw std::invalid_argument("MultiIndex::lowered: axis out of range");
    if (e_[static_cast<std::size_t>(axis - 1)] == 0)
        throw std::invalid_argument("MultiIndex::lowered: exponent already zero");
    std::vector<int> e(e_);
    --e[static_cast<std::size_t>(axis - 1)];
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::raised(int axis) const {
    if (axis < 1 || axis > dim()) throw std::invalid_argument("MultiIndex::raised: axis out of range");
    std::vector<int> e(e_);
    ++e[static_cast<std::size_t>(axis - 1)];
    return MultiIndex(std::move(e));
}

bool MultiIndex::all_even() const {
    for (int v : e_) {
        if (v % 2 != 0) return false;
    }
    return true;
}

std::string MultiIndex::str() const {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < e_.size(); ++i) {
        if (i) os << ',';
        os << e_[i];
    }
    os << ')';
    return os.str();
}

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.exponents() < b.exponents();
}

std::vector<MultiIndex> indices_of_order(int dim, int k) {
    if (dim < 1) throw std::invalid_argument("indices_of_order: dimension must be >= 1");
    std::vector<MultiIndex> out;
    if (k < 0) return out;
    std::vector<int> cur(static_cast<std::size_t>(dim), 0);
    // recursive enumeration emitting exponent vectors in ascending lex order
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == dim - 1) {
            cur[static_cast<std::size_t>(pos)] = remaining;
            out.emplace_back(cur);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            cur[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
    };
    rec(rec, 0, k);
    return out;
}

std::vector<MultiIndex> indices_up_to_order(int dim, int n) {
    std::vector<MultiIndex> out;
    for (int k = 0; k <= n; ++k) {
        auto block = indices_of_order(dim, k);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

std::int64_t monomial_count(int dim, int k) {
    if (k < 0) return 0;
    // C(k + dim - 1, dim - 1)
    std::int64_t num = 1;
    for (int i = 1; i <= dim - 1; ++i) num = num * (k + i) / i;
    return num;
}

std::int64_t polynomial_space_dim(int dim, int n) {
    if (n < 0) return 0;
    std::int64_t num = 1;
    for (int i = 1; i <= dim; ++i) num = num * (n + i) / i;
    return num;
}

std::int64_t multinomial(const MultiIndex& gamma) {
    // build up as prod of binomials C(s_i, gamma_i) with running partial sums
    std::int64_t result = 1;
    int partial = 0;
    for (int i = 0; i < gamma.dim(); ++i) {
        partial += gamma[i];
        std::int64_t binom = 1;
        for (int j = 1; j <= gamma[i]; ++j) binom = binom * (partial - gamma[i] + j) / j;
        result *= binom;
    }
    return result;
}

}  // namespace ballproj
