#include "ballproj/ortho_basis.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "ballproj/linalg.hpp"

namespace ballproj {

real Expansion::norm_squared(int n) const {
    std::vector<real> squares;
    const int top = n < 0 ? static_cast<int>(coefficients.size()) - 1 : n;
    for (int k = 0; k <= top && k < static_cast<int>(coefficients.size()); ++k) {
        for (const real& c : coefficients[static_cast<std::size_t>(k)]) squares.push_back(c * c);
    }
    return pairwise_sum(squares);
}

int default_degree_cap(int dim) {
    switch (dim) {
        case 1: return 40;
        case 2: return 24;
        case 3: return 14;
        default: return 8;
    }
}

OrthoBasis OrthoBasis::build(const WeightParam& w, int max_degree, double tol, bool allow_over_cap) {
    w.validate();
    if (max_degree < 0) throw std::invalid_argument("build_basis: max_degree must be >= 0");
    if (!(tol > 0)) throw std::invalid_argument("build_basis: tolerance must be positive");
    if (!allow_over_cap && max_degree > default_degree_cap(w.dim)) {
        throw std::invalid_argument("build_basis: degree " + std::to_string(max_degree) +
                                    " exceeds the dimension-" + std::to_string(w.dim) + " cap " +
                                    std::to_string(default_degree_cap(w.dim)));
    }
    unsigned bits = basis_start_bits(max_degree);
    while (true) {
        auto attempt = try_build(w, max_degree, tol, bits);
        if (attempt) return std::move(*attempt);
        if (bits >= kMaxPrecisionBits) {
            throw std::runtime_error(
                "build_basis: orthonormality certificate misses tolerance at the precision cap (" +
                std::to_string(kMaxPrecisionBits) + " bits)");
        }
        bits = std::min(bits * 2, kMaxPrecisionBits);
    }
}

OrthoBasis OrthoBasis::build_at_bits(const WeightParam& w, int max_degree, unsigned bits,
                                     bool allow_over_cap) {
    w.validate();
    if (max_degree < 0) throw std::invalid_argument("build_basis: max_degree must be >= 0");
    if (!allow_over_cap && max_degree > default_degree_cap(w.dim)) {
        throw std::invalid_argument("build_basis: degree " + std::to_string(max_degree) +
                                    " exceeds the dimension-" + std::to_string(w.dim) + " cap " +
                                    std::to_string(default_degree_cap(w.dim)));
    }
    if (bits < kMinPrecisionBits || bits > kMaxPrecisionBits)
        throw std::invalid_argument("build_basis: precision outside the supported range");
    auto attempt = try_build(w, max_degree, std::numeric_limits<double>::infinity(), bits);
    if (!attempt)
        throw std::runtime_error("build_basis: construction degenerated at the requested precision");
    // record the attained quality so export/import stays self-consistent
    attempt->tol_ = to_double(attempt->certificate_) * 4 + 1e-300;
    return std::move(*attempt);
}

std::optional<OrthoBasis> OrthoBasis::try_build(const WeightParam& w, int max_degree, double tol,
                                                unsigned bits) {
    PrecisionScope scope(bits);

    OrthoBasis b;
    b.w_ = w;
    b.max_degree_ = max_degree;
    b.bits_ = current_precision_bits();
    b.tol_ = tol;
    b.moments_ = std::make_shared<MomentTable>(w, b.bits_);

    for (const MultiIndex& g : indices_up_to_order(w.dim, max_degree)) {
        const int p = g.order() % 2;
        b.class_pos_[p].emplace(g, b.class_monos_[p].size());
        b.class_monos_[p].push_back(g);
    }

    const Matrix gram[2] = {b.moments_->gram_block(b.class_monos_[0]),
                            b.moments_->gram_block(b.class_monos_[1])};

    std::vector<std::size_t> same_parity[2];  // accepted element ids per class
    for (int k = 0; k <= max_degree; ++k) {
        const int p = k % 2;
        const std::size_t begin = b.elements_.size();
        for (const MultiIndex& g : indices_of_order(w.dim, k)) {
            const std::size_t pos = b.class_pos_[p].at(g);
            std::vector<real> v(b.class_monos_[p].size(), real(0));
            v[pos] = 1;

            // classical Gram-Schmidt, run twice: the second pass clears the
            // first pass's rounding residue (CGS2)
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t id : same_parity[p]) {
                    const Element& e = b.elements_[id];
                    const real c = -dot(v, e.gcoeff);
                    axpy(c, e.coeff, v);
                }
            }

            std::vector<real> gv = matvec(gram[p], v);
            const real nsq = dot(v, gv);
            if (!(nsq > 0)) return std::nullopt;  // precision exhausted
            const real inv = 1 / sqrt(nsq);
            for (real& c : v) c *= inv;
            for (real& c : gv) c *= inv;
            // sign convention: positive coefficient on the element's leading
            // (its own) monomial; Gram-Schmidt against lower elements cannot
            // touch it, so this holds by construction
            if (!(v[pos] > 0)) return std::nullopt;

            same_parity[p].push_back(b.elements_.size());
            b.elements_.push_back(Element{k, p, std::move(v), std::move(gv)});
        }
        b.block_range_.emplace_back(begin, b.elements_.size());
    }

    b.certificate_ = b.compute_certificate();
    if (!(b.certificate_ <= real(tol))) return std::nullopt;
    return b;
}

real OrthoBasis::compute_certificate() const {
    real worst(0);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        for (std::size_t j = i; j < elements_.size(); ++j) {
            if (elements_[i].parity != elements_[j].parity) continue;  // structurally zero
            real g = dot(elements_[i].coeff, elements_[j].gcoeff);
            if (i == j) g -= 1;
            if (abs(g) > worst) worst = abs(g);
        }
    }
    return worst;
}

int OrthoBasis::block_size(int k) const {
    if (k < 0 || k > max_degree_) throw std::invalid_argument("block_size: block out of range");
    const auto [begin, end] = block_range_[static_cast<std::size_t>(k)];
    return static_cast<int>(end - begin);
}

Polynomial OrthoBasis::element(int k, int i) const {
    if (k < 0 || k > max_degree_) throw std::invalid_argument("element: block out of range");
    const auto [begin, end] = block_range_[static_cast<std::size_t>(k)];
    if (i < 0 || begin + static_cast<std::size_t>(i) >= end)
        throw std::invalid_argument("element: index out of range");
    const Element& e = elements_[begin + static_cast<std::size_t>(i)];
    Polynomial::TermMap terms;
    for (std::size_t c = 0; c < e.coeff.size(); ++c) {
        if (e.coeff[c] != 0) terms.emplace(class_monos_[e.parity][c], e.coeff[c]);
    }
    return Polynomial(w_.dim, std::move(terms));
}

std::array<std::vector<real>, 2> OrthoBasis::class_coordinates(const Polynomial& u) const {
    if (u.dim() != w_.dim) throw std::invalid_argument("basis: polynomial dimension mismatch");
    if (u.degree() > max_degree_)
        throw std::invalid_argument("basis: polynomial degree exceeds basis degree");
    std::array<std::vector<real>, 2> coords{
        std::vector<real>(class_monos_[0].size(), real(0)),
        std::vector<real>(class_monos_[1].size(), real(0))};
    for (const auto& [g, c] : u.terms()) {
        const int p = g.order() % 2;
        coords[static_cast<std::size_t>(p)][class_pos_[p].at(g)] = c;
    }
    return coords;
}

Polynomial OrthoBasis::materialize(const std::array<std::vector<real>, 2>& coords) const {
    Polynomial::TermMap terms;
    for (int p = 0; p < 2; ++p) {
        for (std::size_t c = 0; c < coords[static_cast<std::size_t>(p)].size(); ++c) {
            const real& v = coords[static_cast<std::size_t>(p)][c];
            if (v != 0) terms.emplace(class_monos_[static_cast<std::size_t>(p)][c], v);
        }
    }
    return Polynomial(w_.dim, std::move(terms));
}

std::vector<real> OrthoBasis::component_coefficients(const Polynomial& u, int k) const {
    if (k < 0) return {};
    if (k > max_degree_) throw std::invalid_argument("project: block exceeds basis degree");
    PrecisionScope scope(bits_);
    const auto coords = class_coordinates(u);
    const auto [begin, end] = block_range_[static_cast<std::size_t>(k)];
    std::vector<real> out;
    out.reserve(end - begin);
    for (std::size_t id = begin; id < end; ++id) {
        const Element& e = elements_[id];
        out.push_back(dot(coords[static_cast<std::size_t>(e.parity)], e.gcoeff));
    }
    return out;
}

Polynomial OrthoBasis::project_component(const Polynomial& u, int k) const {
    if (k < 0) return Polynomial(w_.dim);
    if (k > max_degree_) throw std::invalid_argument("project: block exceeds basis degree");
    PrecisionScope scope(bits_);
    const auto coords = class_coordinates(u);
    std::array<std::vector<real>, 2> acc{std::vector<real>(class_monos_[0].size(), real(0)),
                                         std::vector<real>(class_monos_[1].size(), real(0))};
    const auto [begin, end] = block_range_[static_cast<std::size_t>(k)];
    for (std::size_t id = begin; id < end; ++id) {
        const Element& e = elements_[id];
        const real c = dot(coords[static_cast<std::size_t>(e.parity)], e.gcoeff);
        axpy(c, e.coeff, acc[static_cast<std::size_t>(e.parity)]);
    }
    return materialize(acc);
}

Polynomial OrthoBasis::truncate(const Polynomial& u, int n) const {
    if (n > max_degree_) throw std::invalid_argument("truncate: degree exceeds basis degree");
    PrecisionScope scope(bits_);
    if (n < 0) return Polynomial(w_.dim);
    const auto coords = class_coordinates(u);
    std::array<std::vector<real>, 2> acc{std::vector<real>(class_monos_[0].size(), real(0)),
                                         std::vector<real>(class_monos_[1].size(), real(0))};
    for (std::size_t id = 0; id < elements_.size(); ++id) {
        const Element& e = elements_[id];
        if (e.degree > n) continue;
        const real c = dot(coords[static_cast<std::size_t>(e.parity)], e.gcoeff);
        axpy(c, e.coeff, acc[static_cast<std::size_t>(e.parity)]);
    }
    return materialize(acc);
}

Expansion OrthoBasis::expand(const Polynomial& u) const {
    PrecisionScope scope(bits_);
    const auto coords = class_coordinates(u);
    Expansion x;
    x.weight = w_;
    x.coefficients.resize(static_cast<std::size_t>(max_degree_) + 1);
    for (int k = 0; k <= max_degree_; ++k) {
        const auto [begin, end] = block_range_[static_cast<std::size_t>(k)];
        auto& ck = x.coefficients[static_cast<std::size_t>(k)];
        ck.reserve(end - begin);
        for (std::size_t id = begin; id < end; ++id) {
            const Element& e = elements_[id];
            ck.push_back(dot(coords[static_cast<std::size_t>(e.parity)], e.gcoeff));
        }
    }
    return x;
}

Polynomial OrthoBasis::synthesize(const Expansion& x, int n) const {
    if (x.weight.dim != w_.dim)
        throw std::invalid_argument("synthesize: expansion dimension mismatch");
    if (static_cast<int>(x.coefficients.size()) > max_degree_ + 1)
        throw std::invalid_argument("synthesize: expansion has more blocks than the basis");
    PrecisionScope scope(bits_);
    const int top = n < 0 ? static_cast<int>(x.coefficients.size()) - 1 : n;
    std::array<std::vector<real>, 2> acc{std::vector<real>(class_monos_[0].size(), real(0)),
                                         std::vector<real>(class_monos_[1].size(), real(0))};
    for (int k = 0; k <= top && k < static_cast<int>(x.coefficients.size()); ++k) {
        const auto [begin, end] = block_range_[static_cast<std::size_t>(k)];
        const auto& ck = x.coefficients[static_cast<std::size_t>(k)];
        if (ck.size() != end - begin)
            throw std::invalid_argument("synthesize: block size mismatch at degree " +
                                        std::to_string(k));
        for (std::size_t i = 0; i < ck.size(); ++i) {
            const Element& e = elements_[begin + i];
            axpy(ck[i], e.coeff, acc[static_cast<std::size_t>(e.parity)]);
        }
    }
    return materialize(acc);
}

void OrthoBasis::export_text(std::ostream& os) const {
    char alpha_hex[64];
    std::snprintf(alpha_hex, sizeof alpha_hex, "%a", w_.alpha);
    os << "ortho-basis v1\n";
    os << "dim " << w_.dim << " alpha_hex " << alpha_hex << " alpha " << w_.alpha
       << " max_degree " << max_degree_ << " precision_bits " << bits_ << " tol " << tol_
       << " certificate " << to_decimal_string(certificate_) << "\n";
    os << "elements " << elements_.size() << "\n";
    for (int k = 0; k <= max_degree_; ++k) {
        const auto [begin, end] = block_range_[static_cast<std::size_t>(k)];
        for (std::size_t id = begin; id < end; ++id) {
            const Polynomial e = element(k, static_cast<int>(id - begin));
            os << "element " << k << ' ' << (id - begin) << ' ' << e.term_count() << "\n";
            os << to_term_lines(e);
        }
    }
    os << "end\n";
}

OrthoBasis OrthoBasis::import_text(std::istream& is) {
    std::string tag, version;
    is >> tag >> version;
    if (tag != "ortho-basis" || version != "v1")
        throw std::runtime_error("basis import: unrecognized header");

    std::string key;
    int dim = 0, max_degree = 0;
    unsigned bits = 0;
    double alpha = 0.0, tol = 0.0;
    std::string alpha_hex;
    double alpha_dec = 0.0;
    std::string certificate_str;
    is >> key >> dim;
    if (key != "dim") throw std::runtime_error("basis import: expected dim");
    is >> key >> alpha_hex;
    if (key != "alpha_hex") throw std::runtime_error("basis import: expected alpha_hex");
    is >> key >> alpha_dec;
    if (key != "alpha") throw std::runtime_error("basis import: expected alpha");
    is >> key >> max_degree;
    if (key != "max_degree") throw std::runtime_error("basis import: expected max_degree");
    is >> key >> bits;
    if (key != "precision_bits") throw std::runtime_error("basis import: expected precision_bits");
    is >> key >> tol;
    if (key != "tol") throw std::runtime_error("basis import: expected tol");
    is >> key >> certificate_str;
    if (key != "certificate") throw std::runtime_error("basis import: expected certificate");
    (void)alpha_dec;  // human-readable only; the hex field is authoritative
    alpha = std::strtod(alpha_hex.c_str(), nullptr);

    std::size_t n_elements = 0;
    is >> key >> n_elements;
    if (key != "elements") throw std::runtime_error("basis import: expected element count");

    PrecisionScope scope(bits);
    OrthoBasis b;
    b.w_ = WeightParam{dim, alpha};
    b.w_.validate();
    b.max_degree_ = max_degree;
    b.bits_ = current_precision_bits();
    b.tol_ = tol;
    b.moments_ = std::make_shared<MomentTable>(b.w_, b.bits_);
    for (const MultiIndex& g : indices_up_to_order(dim, max_degree)) {
        const int p = g.order() % 2;
        b.class_pos_[p].emplace(g, b.class_monos_[p].size());
        b.class_monos_[p].push_back(g);
    }
    const Matrix gram[2] = {b.moments_->gram_block(b.class_monos_[0]),
                            b.moments_->gram_block(b.class_monos_[1])};

    int prev_k = 0;
    std::size_t block_begin = 0;
    for (std::size_t n = 0; n < n_elements; ++n) {
        int k = 0, i = 0;
        std::size_t n_terms = 0;
        is >> key >> k >> i >> n_terms;
        if (key != "element" || !is) throw std::runtime_error("basis import: bad element header");
        if (k < prev_k || k > max_degree)
            throw std::runtime_error("basis import: element blocks out of order");
        while (prev_k < k) {
            b.block_range_.emplace_back(block_begin, b.elements_.size());
            block_begin = b.elements_.size();
            ++prev_k;
        }
        is >> std::ws;
        std::string lines;
        for (std::size_t t = 0; t < n_terms; ++t) {
            std::string line;
            std::getline(is, line);
            if (!is) throw std::runtime_error("basis import: truncated element");
            lines += line;
            lines += '\n';
        }
        Polynomial e = polynomial_from_term_lines(dim, lines);
        if (e.degree() != k) throw std::runtime_error("basis import: element degree mismatch");

        Element el;
        el.degree = k;
        el.parity = k % 2;
        el.coeff.assign(b.class_monos_[el.parity].size(), real(0));
        for (const auto& [g, c] : e.terms()) {
            if (g.order() % 2 != el.parity)
                throw std::runtime_error("basis import: element violates parity");
            el.coeff[b.class_pos_[el.parity].at(g)] = c;
        }
        el.gcoeff = matvec(gram[el.parity], el.coeff);
        b.elements_.push_back(std::move(el));
    }
    while (prev_k <= max_degree) {
        b.block_range_.emplace_back(block_begin, b.elements_.size());
        block_begin = b.elements_.size();
        ++prev_k;
    }
    is >> key;
    if (key != "end") throw std::runtime_error("basis import: missing end marker");

    for (int k = 0; k <= max_degree; ++k) {
        if (b.block_size(k) != static_cast<int>(monomial_count(dim, k)))
            throw std::runtime_error("basis import: block " + std::to_string(k) +
                                     " has wrong dimension");
    }
    b.certificate_ = b.compute_certificate();
    if (!(b.certificate_ <= real(tol)))
        throw std::runtime_error("basis import: orthonormality certificate exceeds stored tolerance");
    return b;
}

OrthoBasis build_basis(const WeightParam& w, int max_degree, double tol) {
    return OrthoBasis::build(w, max_degree, tol);
}

void require_weight_pair(const OrthoBasis& base, const OrthoBasis& raised) {
    if (base.weight().dim != raised.weight().dim)
        throw std::invalid_argument("weight pair: dimension mismatch");
    if (raised.weight().alpha != base.weight().alpha + 1.0)
        throw std::invalid_argument("weight pair: second basis must carry alpha + 1");
}

Polynomial commutator_direct(const OrthoBasis& base, const OrthoBasis& raised, const Polynomial& u,
                             int n, int axis) {
    require_weight_pair(base, raised);
    if (axis < 1 || axis > base.weight().dim)
        throw std::invalid_argument("commutator: axis out of range");
    if (u.degree() > base.max_degree())
        throw std::invalid_argument("commutator: insufficient basis degree");
    if (n > base.max_degree()) throw std::invalid_argument("commutator: truncation exceeds basis");
    const Polynomial du = partial(u, axis);
    return partial(base.truncate(u, n), axis) - base.truncate(du, n);
}

Polynomial commutator_formula(const OrthoBasis& base, const OrthoBasis& raised, const Polynomial& u,
                              int n, int axis) {
    require_weight_pair(base, raised);
    if (axis < 1 || axis > base.weight().dim)
        throw std::invalid_argument("commutator: axis out of range");
    if (u.degree() > base.max_degree())
        throw std::invalid_argument("commutator: insufficient basis degree");
    // the high term hands a degree-(n+1) polynomial to the raised projector
    if (n + 1 > base.max_degree() || n + 1 > raised.max_degree())
        throw std::invalid_argument("commutator: truncation exceeds basis");
    const Polynomial du = partial(u, axis);
    const Polynomial high = raised.project_component(base.project_component(du, n + 1), n - 1);
    const Polynomial low = raised.project_component(base.project_component(du, n), n);
    return high - low;
}

real id_shift_residual(const OrthoBasis& base, const OrthoBasis& raised, const Polynomial& u,
                       int k) {
    require_weight_pair(base, raised);
    if (k < 0) throw std::invalid_argument("shift identity: block must be >= 0");
    // the middle term hands a degree-(k+2) polynomial to the raised projector,
    // so both bases need two blocks of headroom above k
    if (k + 2 > base.max_degree() || k + 2 > raised.max_degree())
        throw std::invalid_argument("shift identity: insufficient degree headroom");
    if (u.degree() > base.max_degree() || u.degree() > raised.max_degree())
        throw std::invalid_argument("shift identity: polynomial degree exceeds bases");
    const Polynomial lhs = raised.project_component(u, k);
    const Polynomial rhs = base.project_component(u, k) +
                           raised.project_component(base.project_component(u, k + 2), k) -
                           raised.project_component(base.project_component(u, k), k - 2);
    return base.moments().norm(lhs - rhs);
}

Expansion project_function(const OrthoBasis& basis, const Integrand& f, const BallRule& rule,
                           int margin) {
    if (rule.weight().dim != basis.weight().dim || rule.weight().alpha != basis.weight().alpha)
        throw std::invalid_argument("project_function: rule weight differs from basis weight");
    if (margin < 0) throw std::invalid_argument("project_function: margin must be >= 0");
    if (rule.exactness() < 2 * basis.max_degree() + margin)
        throw std::invalid_argument("project_function: rule exactness " +
                                    std::to_string(rule.exactness()) + " is below 2N + margin = " +
                                    std::to_string(2 * basis.max_degree() + margin));

    PrecisionScope scope(basis.precision_bits());
    const int d = basis.weight().dim;
    const int n_deg = basis.max_degree();
    const auto monos = indices_up_to_order(d, n_deg);

    // Weighted monomial sums T_g = sum_m w_m f(x_m) x_m^g, accumulated in
    // fixed-size node chunks whose partial sums are combined pairwise, so the
    // reduction is deterministic and memory stays bounded.
    constexpr std::size_t kChunk = 256;
    std::vector<std::vector<real>> chunk_sums(monos.size());
    std::vector<real> running(monos.size(), real(0));
    std::vector<real> powers(static_cast<std::size_t>(d) * (static_cast<std::size_t>(n_deg) + 1));
    for (std::size_t m = 0; m < rule.node_count(); ++m) {
        const auto x = rule.node(m);
        const real wf = rule.node_weights()[m] * f(x);
        // power table: powers[i][e] = x_i^e
        for (int i = 0; i < d; ++i) {
            real* row = powers.data() + static_cast<std::size_t>(i) * (static_cast<std::size_t>(n_deg) + 1);
            row[0] = 1;
            for (int e = 1; e <= n_deg; ++e) row[e] = row[e - 1] * x[static_cast<std::size_t>(i)];
        }
        for (std::size_t g = 0; g < monos.size(); ++g) {
            real term = wf;
            for (int i = 0; i < d; ++i) {
                term *= powers[static_cast<std::size_t>(i) * (static_cast<std::size_t>(n_deg) + 1) +
                               static_cast<std::size_t>(monos[g][i])];
            }
            running[g] += term;
        }
        if ((m + 1) % kChunk == 0 || m + 1 == rule.node_count()) {
            for (std::size_t g = 0; g < monos.size(); ++g) {
                chunk_sums[g].push_back(running[g]);
                running[g] = 0;
            }
        }
    }

    // fold the monomial sums into basis coefficients via each element's
    // coordinate vector
    std::array<std::vector<real>, 2> t_class{
        std::vector<real>(basis.class_monos_[0].size(), real(0)),
        std::vector<real>(basis.class_monos_[1].size(), real(0))};
    for (std::size_t g = 0; g < monos.size(); ++g) {
        const int p = monos[g].order() % 2;
        t_class[static_cast<std::size_t>(p)][basis.class_pos_[p].at(monos[g])] =
            pairwise_sum(chunk_sums[g]);
    }

    Expansion x;
    x.weight = basis.weight();
    x.coefficients.resize(static_cast<std::size_t>(n_deg) + 1);
    for (int k = 0; k <= n_deg; ++k) {
        const auto [begin, end] = basis.block_range_[static_cast<std::size_t>(k)];
        auto& ck = x.coefficients[static_cast<std::size_t>(k)];
        ck.reserve(end - begin);
        for (std::size_t id = begin; id < end; ++id) {
            const auto& e = basis.elements_[id];
            ck.push_back(dot(e.coeff, t_class[static_cast<std::size_t>(e.parity)]));
        }
    }
    return x;
}

}  // namespace ballproj
