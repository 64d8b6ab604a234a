#include "hologen/polymaps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace hologen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Powers z_k^e for e = 0..degree, laid out row-major by coordinate.
std::vector<Complex> power_table(const Vector& z, int degree) {
    const auto n = static_cast<int>(z.size());
    std::vector<Complex> table(static_cast<std::size_t>(n * (degree + 1)));
    for (int k = 0; k < n; ++k) {
        Complex acc = 1.0;
        for (int e = 0; e <= degree; ++e) {
            table[static_cast<std::size_t>(k * (degree + 1) + e)] = acc;
            acc *= z[k];
        }
    }
    return table;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finalizer
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

DiscFunction fejer_from_coefficients(Complex g0, std::vector<Complex> q, int degree) {
    if (degree < 2 || degree > kMaxPolyDegree)
        throw std::invalid_argument("generator degree must be in [2, 32]");
    q.resize(static_cast<std::size_t>(degree), Complex(0.0));
    std::vector<Complex> g(static_cast<std::size_t>(degree + 1), Complex(0.0));
    g[0] = g0;
    g[1] = -q[0];
    for (int j = 1; j < degree; ++j) {
        const double w = 1.0 - static_cast<double>(j) / degree;
        g[static_cast<std::size_t>(j + 1)] = -w * q[static_cast<std::size_t>(j)];
    }
    g[2] -= std::conj(g0);
    return DiscFunction::polynomial(std::move(g));
}

}  // namespace

// ---------------------------------------------------------------- HomPoly

HomPoly::HomPoly(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1) throw std::invalid_argument("HomPoly: dim must be >= 1");
    if (degree < 1 || degree > kMaxPolyDegree)
        throw std::invalid_argument("HomPoly: degree must be in [1, 32], got " +
                                    std::to_string(degree));
}

void HomPoly::add_term(const std::vector<int>& exponents, const Vector& coeff) {
    if (static_cast<int>(exponents.size()) != dim_ || coeff.size() != dim_)
        throw std::invalid_argument("HomPoly::add_term: dimension mismatch");
    int total = 0;
    for (int e : exponents) {
        if (e < 0) throw std::invalid_argument("HomPoly::add_term: negative exponent");
        total += e;
    }
    if (total != degree_)
        throw std::invalid_argument("HomPoly::add_term: monomial has degree " +
                                    std::to_string(total) + ", expected " +
                                    std::to_string(degree_));
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exponents,
                               [](const Monomial& m, const std::vector<int>& key) {
                                   return m.exponents < key;
                               });
    if (it != terms_.end() && it->exponents == exponents)
        it->coeff += coeff;
    else
        terms_.insert(it, Monomial{exponents, coeff});
}

Vector HomPoly::operator()(const Vector& z) const {
    if (z.size() != dim_) throw std::invalid_argument("HomPoly: dimension mismatch");
    Vector out = Vector::Zero(dim_);
    if (terms_.empty()) return out;
    const auto table = power_table(z, degree_);
    for (const auto& m : terms_) {
        Complex mono = 1.0;
        for (int k = 0; k < dim_; ++k)
            if (m.exponents[static_cast<std::size_t>(k)] != 0)
                mono *= table[static_cast<std::size_t>(k * (degree_ + 1) +
                                                       m.exponents[static_cast<std::size_t>(k)])];
        out += mono * m.coeff;
    }
    return out;
}

HomPoly HomPoly::scaled(Complex c) const {
    HomPoly out = *this;
    for (auto& m : out.terms_) m.coeff *= c;
    return out;
}

HomPoly HomPoly::left_multiplied(const Matrix& m) const {
    HomPoly out = *this;
    for (auto& t : out.terms_) t.coeff = m * t.coeff;
    return out;
}

// ---------------------------------------------------------------- PolyMap

PolyMap::PolyMap(NormedSpace space, Vector constant, Matrix linear, std::vector<HomPoly> higher)
    : space_(space), constant_(std::move(constant)), linear_(std::move(linear)),
      higher_(std::move(higher)) {
    const int n = space_.dim();
    if (constant_.size() != n) throw std::invalid_argument("PolyMap: constant has wrong length");
    if (linear_.rows() != n || linear_.cols() != n)
        throw std::invalid_argument("PolyMap: linear part must be dim x dim");
    std::sort(higher_.begin(), higher_.end(),
              [](const HomPoly& a, const HomPoly& b) { return a.degree() < b.degree(); });
    for (std::size_t i = 0; i < higher_.size(); ++i) {
        if (higher_[i].dim() != n) throw std::invalid_argument("PolyMap: HomPoly dim mismatch");
        if (higher_[i].degree() < 2)
            throw std::invalid_argument("PolyMap: higher parts must have degree >= 2");
        if (i > 0 && higher_[i].degree() == higher_[i - 1].degree())
            throw std::invalid_argument("PolyMap: duplicate homogeneous degree " +
                                        std::to_string(higher_[i].degree()));
    }
}

PolyMap PolyMap::zero(const NormedSpace& space) {
    const int n = space.dim();
    return PolyMap(space, Vector::Zero(n), Matrix::Zero(n, n));
}

PolyMap PolyMap::linear_map(const NormedSpace& space, const Matrix& m) {
    return PolyMap(space, Vector::Zero(space.dim()), m);
}

const HomPoly* PolyMap::part(int j) const {
    for (const auto& h : higher_)
        if (h.degree() == j) return &h;
    return nullptr;
}

int PolyMap::degree() const {
    for (auto it = higher_.rbegin(); it != higher_.rend(); ++it)
        if (!it->empty()) return it->degree();
    if (!linear_.isZero(0.0)) return 1;
    return 0;
}

Vector PolyMap::evaluate(const Vector& z) const {
    const double nz = space_.norm(z);
    if (!(nz < 1.0))
        throw std::domain_error("PolyMap::evaluate: point outside the open unit ball (norm " +
                                std::to_string(nz) + ")");
    return evaluate_entire(z);
}

Vector PolyMap::evaluate_entire(const Vector& z) const {
    check_dim(space_, z);
    Vector out = constant_ + linear_ * z;
    for (const auto& h : higher_) out += h(z);
    return out;
}

// ---------------------------------------------------------------- Herglotz

Complex HerglotzData::operator()(Complex zeta) const {
    Complex q(0.0, beta);
    for (const auto& a : atoms) {
        const Complex u = std::polar(1.0, -a.angle) * zeta;
        q += a.weight * (1.0 + u) / (1.0 - u);
    }
    return q;
}

std::vector<Complex> HerglotzData::taylor(int order) const {
    std::vector<Complex> c(static_cast<std::size_t>(order + 1), Complex(0.0));
    c[0] = Complex(0.0, beta);
    for (const auto& a : atoms) {
        c[0] += a.weight;
        for (int j = 1; j <= order; ++j)
            c[static_cast<std::size_t>(j)] += 2.0 * a.weight * std::polar(1.0, -j * a.angle);
    }
    return c;
}

// ---------------------------------------------------------------- DiscFunction

DiscFunction DiscFunction::polynomial(std::vector<Complex> coefficients) {
    if (coefficients.empty()) coefficients.push_back(0.0);
    return DiscFunction(Data(std::move(coefficients)));
}

DiscFunction DiscFunction::herglotz(HerglotzData data) {
    for (const auto& a : data.atoms)
        if (!(a.weight >= 0.0)) throw std::invalid_argument("Herglotz atom weight must be >= 0");
    return DiscFunction(Data(std::move(data)));
}

DiscFunction DiscFunction::black_box(std::function<Complex(Complex)> f) {
    if (!f) throw std::invalid_argument("black-box disc function is empty");
    return DiscFunction(Data(std::move(f)));
}

DiscFunction::Kind DiscFunction::kind() const {
    switch (data_.index()) {
        case 0: return Kind::Polynomial;
        case 1: return Kind::Herglotz;
        case 2: return Kind::GeneratorComposite;
        default: return Kind::BlackBox;
    }
}

Complex DiscFunction::operator()(Complex zeta) const {
    struct Visitor {
        Complex zeta;
        Complex operator()(const std::vector<Complex>& c) const {
            Complex acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * zeta + *it;
            return acc;
        }
        Complex operator()(const HerglotzData& h) const { return h(zeta); }
        Complex operator()(const Composite& g) const {
            return g.g0 - std::conj(g.g0) * zeta * zeta - zeta * (*g.q)(zeta);
        }
        Complex operator()(const std::function<Complex(Complex)>& f) const { return f(zeta); }
    };
    return std::visit(Visitor{zeta}, data_);
}

const std::vector<Complex>& DiscFunction::coefficients() const {
    if (const auto* c = std::get_if<std::vector<Complex>>(&data_)) return *c;
    throw std::logic_error("DiscFunction::coefficients: not a polynomial");
}

const HerglotzData& DiscFunction::herglotz_data() const {
    if (const auto* h = std::get_if<HerglotzData>(&data_)) return *h;
    throw std::logic_error("DiscFunction::herglotz_data: not a Herglotz function");
}

std::vector<Complex> taylor_coefficients(const DiscFunction& f, int order, double radius) {
    if (order < 1 || order > 512) throw std::invalid_argument("taylor order must be in [1, 512]");
    if (!(radius > 0.0 && radius < 1.0))
        throw std::invalid_argument("taylor radius must be in (0, 1)");
    const int nodes = 4 * (order + 1);
    std::vector<Complex> values(static_cast<std::size_t>(nodes));
    for (int m = 0; m < nodes; ++m) {
        const Complex zeta = std::polar(radius, kTwoPi * m / nodes);
        Complex v;
        try {
            v = f(zeta);
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("taylor_coefficients: evaluator failed: ") +
                                     e.what());
        }
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error("taylor_coefficients: non-finite value on the circle");
        values[static_cast<std::size_t>(m)] = v;
    }
    std::vector<Complex> c(static_cast<std::size_t>(order + 1));
    for (int k = 0; k <= order; ++k) {
        Complex s = 0.0;
        for (int m = 0; m < nodes; ++m)
            s += values[static_cast<std::size_t>(m)] *
                 std::polar(1.0, -kTwoPi * static_cast<double>((static_cast<long>(k) * m) % nodes) /
                                     nodes);
        c[static_cast<std::size_t>(k)] = s / (nodes * std::pow(radius, k));
    }
    return c;
}

DiscFunction herglotz_sample(std::uint64_t seed, int atoms) {
    if (atoms < 1) throw std::invalid_argument("herglotz_sample: atoms must be >= 1");
    std::mt19937_64 rng(mix_seed(seed, 0x4e1));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    HerglotzData h;
    h.beta = 2.0 * unit(rng) - 1.0;
    for (int m = 0; m < atoms; ++m) {
        const double w = 0.05 + 0.95 * unit(rng);
        const double phi = kTwoPi * unit(rng);
        h.atoms.push_back({w, phi});
    }
    return DiscFunction::herglotz(std::move(h));
}

DiscFunction disc_generator_from(Complex g0, const DiscFunction& q) {
    static constexpr double radii[] = {0.2, 0.5, 0.8, 0.95};
    for (double r : radii) {
        for (int k = 0; k < 16; ++k) {
            const Complex zeta = std::polar(r, kTwoPi * k / 16.0);
            const double re = q(zeta).real();
            if (re < -1e-9)
                throw std::invalid_argument("invalid Herglotz data: Re q = " + std::to_string(re) +
                                            " at |zeta| = " + std::to_string(r));
        }
    }
    return DiscFunction(DiscFunction::Data(
        DiscFunction::Composite{g0, std::make_shared<const DiscFunction>(q)}));
}

DiscFunction fejer_generator(Complex g0, const DiscFunction& q, int degree) {
    if (degree < 2 || degree > kMaxPolyDegree)
        throw std::invalid_argument("generator degree must be in [2, 32]");
    std::vector<Complex> qc;
    if (q.kind() == DiscFunction::Kind::Herglotz)
        qc = q.herglotz_data().taylor(degree - 1);
    else if (q.kind() == DiscFunction::Kind::Polynomial)
        qc = q.coefficients();
    else
        qc = taylor_coefficients(q, std::max(1, degree - 1));
    return fejer_from_coefficients(g0, std::move(qc), degree);
}

PolyMap lift_to_ball(const NormedSpace& space, std::span<const DiscFunction> disc_gens,
                     int degree) {
    const int n = space.dim();
    if (static_cast<int>(disc_gens.size()) != n)
        throw std::invalid_argument("lift_to_ball: need one disc generator per coordinate");
    if (degree > kMaxPolyDegree)
        throw std::invalid_argument("lift_to_ball: truncation degree " + std::to_string(degree) +
                                    " exceeds 32");
    if (degree < 0) {
        degree = 1;
        for (const auto& g : disc_gens) {
            if (g.kind() != DiscFunction::Kind::Polynomial)
                throw std::invalid_argument(
                    "lift_to_ball: degree required for non-polynomial inputs");
            degree = std::max(degree, static_cast<int>(g.coefficients().size()) - 1);
        }
        if (degree > kMaxPolyDegree)
            throw std::invalid_argument("lift_to_ball: truncation degree exceeds 32");
    }
    degree = std::max(degree, 1);

    Vector constant = Vector::Zero(n);
    Matrix linear = Matrix::Zero(n, n);
    std::vector<HomPoly> higher;
    for (int j = 2; j <= degree; ++j) higher.emplace_back(n, j);

    for (int k = 0; k < n; ++k) {
        const auto& g = disc_gens[static_cast<std::size_t>(k)];
        std::vector<Complex> c = g.kind() == DiscFunction::Kind::Polynomial
                                     ? g.coefficients()
                                     : taylor_coefficients(g, degree);
        c.resize(static_cast<std::size_t>(degree + 1), Complex(0.0));
        constant[k] = c[0];
        linear(k, k) = c[1];
        for (int j = 2; j <= degree; ++j) {
            if (c[static_cast<std::size_t>(j)] == Complex(0.0)) continue;
            std::vector<int> ex(static_cast<std::size_t>(n), 0);
            ex[static_cast<std::size_t>(k)] = j;
            Vector coeff = Vector::Zero(n);
            coeff[k] = c[static_cast<std::size_t>(j)];
            higher[static_cast<std::size_t>(j - 2)].add_term(ex, coeff);
        }
    }
    std::erase_if(higher, [](const HomPoly& h) { return h.empty(); });
    return PolyMap(space, constant, linear, std::move(higher));
}

Matrix random_unitary(int n, std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0x0a17));
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix column phases so the distribution is Haar.
    for (int j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

PolyMap conjugate_by_unitary(const PolyMap& map, const Matrix& unitary) {
    const NormedSpace& space = map.space();
    if (!space.is_hilbert())
        throw std::invalid_argument("conjugate_by_unitary: only the 2-norm ball is unitarily invariant");
    const int n = space.dim();
    if (unitary.rows() != n || unitary.cols() != n)
        throw std::invalid_argument("conjugate_by_unitary: matrix has wrong shape");
    if ((unitary.adjoint() * unitary - Matrix::Identity(n, n)).norm() > 1e-12)
        throw std::invalid_argument("conjugate_by_unitary: matrix is not unitary");

    const Matrix w = unitary.adjoint();
    using Scalar = std::map<std::vector<int>, Complex>;

    // Scalar polynomial of the linear form (W z)_k.
    auto linear_form = [&](int k) {
        Scalar s;
        for (int l = 0; l < n; ++l) {
            if (w(k, l) == Complex(0.0)) continue;
            std::vector<int> ex(static_cast<std::size_t>(n), 0);
            ex[static_cast<std::size_t>(l)] = 1;
            s[ex] += w(k, l);
        }
        return s;
    };
    auto multiply = [&](const Scalar& a, const Scalar& b) {
        Scalar out;
        for (const auto& [ea, ca] : a)
            for (const auto& [eb, cb] : b) {
                std::vector<int> e(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i)
                    e[static_cast<std::size_t>(i)] =
                        ea[static_cast<std::size_t>(i)] + eb[static_cast<std::size_t>(i)];
                out[e] += ca * cb;
            }
        return out;
    };

    std::vector<Scalar> forms;
    for (int k = 0; k < n; ++k) forms.push_back(linear_form(k));

    std::vector<HomPoly> higher;
    for (const auto& h : map.higher()) {
        HomPoly out(n, h.degree());
        for (const auto& m : h.terms()) {
            Scalar prod{{std::vector<int>(static_cast<std::size_t>(n), 0), Complex(1.0)}};
            for (int k = 0; k < n; ++k)
                for (int e = 0; e < m.exponents[static_cast<std::size_t>(k)]; ++e)
                    prod = multiply(prod, forms[static_cast<std::size_t>(k)]);
            const Vector rotated = unitary * m.coeff;
            for (const auto& [ex, c] : prod) out.add_term(ex, c * rotated);
        }
        higher.push_back(std::move(out));
    }
    return PolyMap(space, unitary * map.constant(), unitary * map.linear() * w,
                   std::move(higher));
}

DiscFunction restrict_to_direction(const PolyMap& map, const Vector& v,
                                   SupportSelection selection) {
    const NormedSpace& space = map.space();
    const double nv = space.norm(v);
    if (std::abs(nv - 1.0) > 1e-12)
        throw std::invalid_argument("restrict: direction must be a unit vector (norm " +
                                    std::to_string(nv) + ")");
    const Vector vstar = dual_vector(space, v, selection);
    const int d = std::max(1, map.degree());
    std::vector<Complex> c(static_cast<std::size_t>(d + 1), Complex(0.0));
    c[0] = pairing(map.constant(), vstar);
    c[1] = pairing(map.linear() * v, vstar);
    for (const auto& h : map.higher())
        c[static_cast<std::size_t>(h.degree())] = pairing(h(v), vstar);
    return DiscFunction::polynomial(std::move(c));
}

PolyMap sample_lifted_generator(const NormedSpace& space, std::uint64_t seed, int degree,
                                const GeneratorSampleOptions& options) {
    if (degree < 2 || degree > kMaxPolyDegree)
        throw std::invalid_argument("sample_lifted_generator: degree must be in [2, 32]");
    const int n = space.dim();
    std::mt19937_64 rng(mix_seed(seed, 0x5a3));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const bool constant_allowed = n == 1 || space.is_inf() || space.is_hilbert();
    Vector g0 = Vector::Zero(n);
    if (constant_allowed && unit(rng) < 0.75) {
        for (int k = 0; k < n; ++k)
            g0[k] = std::polar(options.g0_scale * unit(rng), kTwoPi * unit(rng));
    }
    // On the 2-ball the coupling term sum_k Re(g0_k conj z_k)(|z|^2 - |z_k|^2)
    // is dominated by |g0|_2 |z|^2 once every Re q_k >= |g0|_2.
    const double damping = (space.is_hilbert() && n > 1) ? g0.norm() : 0.0;

    std::vector<DiscFunction> gens;
    for (int k = 0; k < n; ++k) {
        const int atoms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                                   std::max(1, options.max_atoms)));
        const auto q = herglotz_sample(mix_seed(seed, 100 + static_cast<std::uint64_t>(k)), atoms);
        auto qc = q.herglotz_data().taylor(degree - 1);
        qc[0] += damping;
        gens.push_back(fejer_from_coefficients(g0[k], std::move(qc), degree));
    }
    PolyMap lifted = lift_to_ball(space, gens, degree);
    if (space.is_hilbert() && n > 1 && options.unitary_mix)
        lifted = conjugate_by_unitary(lifted, random_unitary(n, mix_seed(seed, 0x77)));
    return lifted;
}

}  // namespace hologen
