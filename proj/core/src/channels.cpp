#include "boson/channels.hpp"

#include "boson/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace boson {

using special::log_binomial;
using special::log_factorial;

namespace {

constexpr double kEnvTail = 1e-10;

std::size_t uz(Index i) { return static_cast<std::size_t>(i); }

Matrix resized(const Matrix& x, Index dim) {
    Matrix out = Matrix::Zero(dim, dim);
    const Index k = std::min(dim, x.rows());
    out.topLeftCorner(k, k) = x.topLeftCorner(k, k);
    return out;
}

void require_square(const Matrix& x, const char* who) {
    if (x.rows() != x.cols() || x.rows() == 0)
        throw ValidationError(std::string(who) + ": expected a non-empty square matrix");
}

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(name) + " must lie in [0, 1]");
}

void check_nonneg(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be finite and nonnegative");
}

// ------------------------------------------------------------ beam splitter

// Columns col[i][m] = <m, i+e-m| U |i, e>, i < in_dim, m = 0..i+e, for U with cos = c, sin = s.
// Built from U|0,e> and U a^dagger U^dagger = c a^dagger - s b^dagger.
std::vector<std::vector<double>> beam_splitter_columns(double c, double s, Index e, Index in_dim) {
    std::vector<std::vector<double>> col(uz(in_dim));
    const double lc = std::log(c);
    const double ls = std::log(s);
    auto& first = col[0];
    first.resize(uz(e) + 1);
    for (Index m = 0; m <= e; ++m)
        first[uz(m)] = std::exp(0.5 * log_binomial(uz(e), uz(m)) + static_cast<double>(m) * ls +
                                static_cast<double>(e - m) * lc);
    for (Index i = 1; i < in_dim; ++i) {
        const auto& prev = col[uz(i - 1)];
        const Index p = i - 1 + e;
        std::vector<double> next(uz(p) + 2, 0.0);
        const double inv = 1.0 / std::sqrt(static_cast<double>(i));
        for (Index m = 0; m <= p; ++m) {
            const double v = prev[uz(m)] * inv;
            next[uz(m) + 1] += c * std::sqrt(static_cast<double>(m + 1)) * v;
            next[uz(m)] -= s * std::sqrt(static_cast<double>(p - m + 1)) * v;
        }
        col[uz(i)] = std::move(next);
    }
    return col;
}

// Visits every Kraus operator of the dilated channel with 0 < eta < 1. Each one is a shifted
// diagonal m = i + d with entries w(i); fn(weight, d, i_lo, w) gets them for i_lo <= i < i_lo + w.size().
template <typename Fn>
void for_each_dilation_kraus(double eta, double N, Index in_dim, Index out_dim, Fn&& fn) {
    const double c = std::sqrt(eta);
    const double s = std::sqrt(1.0 - eta);
    const Index env = environment_dim(N);
    const double lq = N > 0.0 ? std::log(N) - std::log1p(N) : 0.0;
    const double lp = -std::log1p(N);
    Eigen::VectorXd w;
    for (Index e = 0; e < env; ++e) {
        const double t = std::exp(lp + static_cast<double>(e) * lq);
        const auto col = beam_splitter_columns(c, s, e, in_dim);
        for (Index d = -(in_dim - 1); d <= std::min(e, out_dim - 1); ++d) {
            const Index lo = std::max<Index>(0, -d);
            const Index hi = std::min(in_dim - 1, out_dim - 1 - d);
            if (lo > hi) continue;
            w.resize(hi - lo + 1);
            for (Index i = lo; i <= hi; ++i) w(i - lo) = col[uz(i)][uz(i + d)];
            fn(t, d, lo, w);
        }
    }
}

Matrix dilation_apply(const Matrix& x, double eta, double N, Index out_dim) {
    const Index in_dim = x.rows();
    Matrix out = Matrix::Zero(out_dim, out_dim);
    for_each_dilation_kraus(eta, N, in_dim, out_dim, [&](double t, Index d, Index lo, const Eigen::VectorXd& w) {
        const Index len = w.size();
        const Eigen::MatrixXd ww = t * w * w.transpose();
        out.block(lo + d, lo + d, len, len).array() += x.block(lo, lo, len, len).array() * ww.array().cast<Complex>();
    });
    return out;
}

Matrix dilation_dual(const Matrix& a, double eta, double N, Index in_dim) {
    const Index out_dim = a.rows();
    Matrix res = Matrix::Zero(in_dim, in_dim);
    for_each_dilation_kraus(eta, N, in_dim, out_dim, [&](double t, Index d, Index lo, const Eigen::VectorXd& w) {
        const Index len = w.size();
        const Eigen::MatrixXd ww = t * w * w.transpose();
        res.block(lo, lo, len, len).array() += a.block(lo + d, lo + d, len, len).array() * ww.array().cast<Complex>();
    });
    return res;
}

// ---------------------------------------------------------------- amplifier

// ln <i+k| A_k |i> for the Kraus operators of A_kappa, kappa > 1.
double amplifier_log_element(Index k, Index i, double kappa) {
    return 0.5 * log_binomial(uz(i + k), uz(k)) + 0.5 * static_cast<double>(k) * std::log((kappa - 1.0) / kappa) -
           0.5 * static_cast<double>(i + 1) * std::log(kappa);
}

Eigen::VectorXd amplifier_diagonal(Index k, Index len, double kappa) {
    Eigen::VectorXd w(len);
    for (Index i = 0; i < len; ++i) w(i) = std::exp(amplifier_log_element(k, i, kappa));
    return w;
}

Matrix amplifier_apply(const Matrix& x, double kappa, Index out_dim) {
    const Index in_dim = x.rows();
    Matrix out = Matrix::Zero(out_dim, out_dim);
    for (Index k = 0; k < out_dim; ++k) {
        const Index len = std::min(in_dim, out_dim - k);
        const Eigen::VectorXd w = amplifier_diagonal(k, len, kappa);
        const Eigen::MatrixXd ww = w * w.transpose();
        out.block(k, k, len, len).array() += x.topLeftCorner(len, len).array() * ww.array().cast<Complex>();
    }
    return out;
}

Matrix amplifier_dual(const Matrix& a, double kappa, Index in_dim) {
    const Index out_dim = a.rows();
    Matrix res = Matrix::Zero(in_dim, in_dim);
    for (Index k = 0; k < out_dim; ++k) {
        const Index len = std::min(in_dim, out_dim - k);
        const Eigen::VectorXd w = amplifier_diagonal(k, len, kappa);
        const Eigen::MatrixXd ww = w * w.transpose();
        res.topLeftCorner(len, len).array() += a.block(k, k, len, len).array() * ww.array().cast<Complex>();
    }
    return res;
}

// --------------------------------------------------------------- quadrature

Matrix quadrature_apply(const Matrix& x, double n, Index out_dim) {
    const auto rule = KrausQuadrature::classical_noise_for(n, x.rows(), out_dim);
    Matrix out = Matrix::Zero(out_dim, out_dim);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const Matrix d = displacement_matrix(rule.nodes[j], out_dim, x.rows());
        out.noalias() += rule.weights[j] * (d * x * d.adjoint());
    }
    return out;
}

Matrix quadrature_dual(const Matrix& a, double n, Index in_dim) {
    const auto rule = KrausQuadrature::classical_noise_for(n, in_dim, a.rows());
    Matrix res = Matrix::Zero(in_dim, in_dim);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const Matrix d = displacement_matrix(rule.nodes[j], a.rows(), in_dim);
        res.noalias() += rule.weights[j] * (d.adjoint() * a * d);
    }
    return res;
}

// -------------------------------------------------------- classical noise

Matrix classical_linear(const Matrix& x, double n, Index out_dim, ClassicalMethod method) {
    if (n == 0.0) return resized(x, out_dim);
    if (method == ClassicalMethod::Quadrature) return quadrature_apply(x, n, out_dim);
    return ClassicalNoiseKernel(n, x.rows(), out_dim).apply(x);
}

Matrix classical_dual(const Matrix& a, double n, Index in_dim, ClassicalMethod method) {
    if (n == 0.0) return resized(a, in_dim);
    if (method == ClassicalMethod::Quadrature) return quadrature_dual(a, n, in_dim);
    return ClassicalNoiseKernel(n, a.rows(), in_dim).apply(a);
}

Matrix thermal_linear(const Matrix& x, double eta, double N, Index out_dim, ThermalMethod method,
                      ClassicalMethod classical) {
    if (eta == 1.0) return resized(x, out_dim);
    if (eta == 0.0) return x.trace() * thermal_state(N, out_dim).entries();
    if (method == ThermalMethod::Decomposition || N == 0.0) {
        // Pure loss never raises the photon number, so the intermediate keeps the input dimension.
        const Matrix lossy = dilation_apply(x, eta, 0.0, x.rows());
        return classical_linear(lossy, (1.0 - eta) * N, out_dim, classical);
    }
    return dilation_apply(x, eta, N, out_dim);
}

Matrix thermal_dual(const Matrix& a, double eta, double N, Index in_dim, ThermalMethod method,
                    ClassicalMethod classical) {
    if (eta == 1.0) return resized(a, in_dim);
    if (eta == 0.0) {
        const Complex v = (thermal_state(N, a.rows()).entries() * a).trace();
        return v * Matrix::Identity(in_dim, in_dim);
    }
    if (method == ThermalMethod::Decomposition || N == 0.0) {
        const Matrix back = classical_dual(a, (1.0 - eta) * N, in_dim, classical);
        return dilation_dual(back, eta, 0.0, in_dim);
    }
    return dilation_dual(a, eta, N, in_dim);
}

DensityMatrix finish(const Matrix& out, double tr_in, const ChannelOptions& opts, const char* who) {
    const double lost = tr_in - out.trace().real();
    if (lost > opts.max_trace_deficit && !opts.allow_truncation) {
        std::ostringstream os;
        os << who << ": truncated output lost " << lost << " of the trace (limit " << opts.max_trace_deficit
           << "); increase the output dimension";
        throw TruncationError(os.str(), lost);
    }
    return DensityMatrix::from_channel_output(out);
}

Index out_dim_for(const ChannelOptions& opts, Index in_dim) {
    if (opts.output_dim < 0) throw DomainError("output dimension must be nonnegative");
    return opts.output_dim == 0 ? in_dim : opts.output_dim;
}

}  // namespace

// ------------------------------------------------------------------- specs

void validate(const ChannelSpec& spec) {
    std::visit(
        [](const auto& ch) {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, ClassicalNoise>) {
                check_nonneg(ch.n, "classical noise n");
            } else if constexpr (std::is_same_v<T, ThermalNoise>) {
                check_unit(ch.eta, "transmissivity eta");
                check_nonneg(ch.N, "thermal photon number N");
            } else if constexpr (std::is_same_v<T, PureLoss>) {
                check_unit(ch.eta, "transmissivity eta");
            } else {
                if (!(ch.kappa >= 1.0) || !std::isfinite(ch.kappa)) throw DomainError("amplifier gain kappa must be >= 1");
            }
        },
        spec);
}

std::string describe(const ChannelSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& ch) {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, ClassicalNoise>) os << "classical(n=" << ch.n << ")";
            else if constexpr (std::is_same_v<T, ThermalNoise>) os << "thermal(eta=" << ch.eta << ",N=" << ch.N << ")";
            else if constexpr (std::is_same_v<T, PureLoss>) os << "loss(eta=" << ch.eta << ")";
            else os << "amplifier(kappa=" << ch.kappa << ")";
        },
        spec);
    return os.str();
}

double vacuum_output_photons(const ChannelSpec& spec) {
    validate(spec);
    return std::visit(
        [](const auto& ch) -> double {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, ClassicalNoise>) return ch.n;
            else if constexpr (std::is_same_v<T, ThermalNoise>) return (1.0 - ch.eta) * ch.N;
            else if constexpr (std::is_same_v<T, PureLoss>) return 0.0;
            else return ch.kappa - 1.0;
        },
        spec);
}

Index environment_dim(double N) {
    check_nonneg(N, "thermal photon number N");
    if (N == 0.0) return 1;
    const double q = N / (N + 1.0);
    return std::max<Index>(1, static_cast<Index>(std::ceil(std::log(kEnvTail) / std::log(q))));
}

// --------------------------------------------------------------- quadrature

KrausQuadrature KrausQuadrature::classical_noise(double n, std::size_t radial, std::size_t angular) {
    check_nonneg(n, "classical noise n");
    if (radial == 0 || angular == 0) throw DomainError("quadrature needs at least one node per direction");
    const auto& rule = special::gauss_laguerre(radial);
    KrausQuadrature q;
    q.nodes.reserve(radial * angular);
    q.weights.reserve(radial * angular);
    // |mu|^2 = s, u = (1+n) s / n:  int d^2mu P_n f = int_0^inf du e^{-u} int dtheta/(2 pi) [e^{s} f] / (1+n)
    // where e^{s} f is polynomial for f = <m|D rho D^dagger|m'>.
    const double frac = n / (1.0 + n);
    for (std::size_t j = 0; j < radial; ++j) {
        const double u = rule.nodes[j];
        const double s = frac * u;
        const double w = std::exp(rule.log_weights[j] + s) / ((1.0 + n) * static_cast<double>(angular));
        const double r = std::sqrt(s);
        for (std::size_t a = 0; a < angular; ++a) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(a) / static_cast<double>(angular);
            q.nodes.push_back(std::polar(r, theta));
            q.weights.push_back(w);
        }
    }
    return q;
}

KrausQuadrature KrausQuadrature::classical_noise_for(double n, Index in_dim, Index out_dim) {
    const auto total = static_cast<std::size_t>(in_dim + out_dim);
    const std::size_t radial = std::max<std::size_t>(24, total / 2);
    std::size_t angular = std::max<std::size_t>(48, total);
    angular += angular % 2;
    return classical_noise(n, radial, angular);
}

// ------------------------------------------------------------------ kernel

ClassicalNoiseKernel::ClassicalNoiseKernel(double n, Index in_dim, Index out_dim)
    : n_(n), in_dim_(in_dim), out_dim_(out_dim) {
    check_nonneg(n, "classical noise n");
    if (in_dim <= 0 || out_dim <= 0) throw DomainError("ClassicalNoiseKernel: dimensions must be positive");
    const Index L = std::min(in_dim, out_dim);
    blocks_.resize(uz(L));

    if (n == 0.0) {
        for (Index l = 0; l < L; ++l) blocks_[uz(l)] = Eigen::MatrixXd::Identity(in_dim - l, out_dim - l);
        return;
    }

    if (n <= 1.0) {
        const double ln_n = std::log(n);
        const double ln_1pn = std::log1p(n);
        const double ln_w = n < 1.0 ? std::log1p(-n * n) : 0.0;
        std::vector<double> terms;
        for (Index l = 0; l < L; ++l) {
            auto& b = blocks_[uz(l)];
            b.resize(in_dim - l, out_dim - l);
            for (Index j = 0; j < in_dim - l; ++j) {
                for (Index k = 0; k < out_dim - l; ++k) {
                    const Index c = j + k + l;
                    const Index mmax = n < 1.0 ? std::min(j, k) : 0;
                    terms.clear();
                    double top = -std::numeric_limits<double>::infinity();
                    for (Index m = 0; m <= mmax; ++m) {
                        const double t = static_cast<double>(m) * ln_w + static_cast<double>(j + k - 2 * m) * ln_n +
                                         log_factorial(uz(c - m)) - log_factorial(uz(m)) - log_factorial(uz(j - m)) -
                                         log_factorial(uz(k - m));
                        terms.push_back(t);
                        top = std::max(top, t);
                    }
                    double sum = 0.0;
                    for (double t : terms) sum += std::exp(t - top);
                    const double pre = 0.5 * (log_factorial(uz(k)) - log_factorial(uz(k + l)) + log_factorial(uz(j)) -
                                              log_factorial(uz(j + l))) -
                                       static_cast<double>(c + 1) * ln_1pn;
                    b(j, k) = std::exp(pre + top + std::log(sum));
                }
            }
        }
        return;
    }

    // n > 1: C_l = Loss_l * Amp_l with eta = 1/(1+n), kappa = 1+n.
    const double eta = 1.0 / (1.0 + n);
    const double kappa = 1.0 + n;
    const double ln_eta = std::log(eta);
    const double ln_loss = std::log1p(-eta);
    for (Index l = 0; l < L; ++l) {
        const Index nj = in_dim - l;
        const Index nk = out_dim - l;
        Eigen::MatrixXd loss = Eigen::MatrixXd::Zero(nj, nj);
        for (Index j = 0; j < nj; ++j)
            for (Index p = 0; p <= j; ++p)
                loss(j, p) = std::exp(0.5 * (log_binomial(uz(j + l), uz(j - p)) + log_binomial(uz(j), uz(j - p))) +
                                      (static_cast<double>(p) + 0.5 * static_cast<double>(l)) * ln_eta +
                                      static_cast<double>(j - p) * ln_loss);
        Eigen::MatrixXd amp = Eigen::MatrixXd::Zero(nj, nk);
        for (Index p = 0; p < nj; ++p)
            for (Index k = p; k < nk; ++k)
                amp(p, k) = std::exp(amplifier_log_element(k - p, p + l, kappa) + amplifier_log_element(k - p, p, kappa));
        blocks_[uz(l)] = loss * amp;
    }
}

double ClassicalNoiseKernel::coefficient(Index l, Index j, Index k) const {
    if (l < 0 || l >= static_cast<Index>(blocks_.size())) return 0.0;
    const auto& b = blocks_[uz(l)];
    if (j < 0 || k < 0 || j >= b.rows() || k >= b.cols()) return 0.0;
    return b(j, k);
}

Matrix ClassicalNoiseKernel::apply(const Matrix& x) const {
    require_square(x, "ClassicalNoiseKernel::apply");
    if (x.rows() != in_dim_) throw DomainError("ClassicalNoiseKernel::apply: input dimension mismatch");
    Matrix out = Matrix::Zero(out_dim_, out_dim_);
    for (Index l = 0; l < static_cast<Index>(blocks_.size()); ++l) {
        const auto& b = blocks_[uz(l)];
        const Index nj = b.rows();
        Vector lower(nj), upper(nj);
        for (Index j = 0; j < nj; ++j) {
            lower(j) = x(j + l, j);
            upper(j) = x(j, j + l);
        }
        const Vector lo = b.transpose().cast<Complex>() * lower;
        for (Index k = 0; k < b.cols(); ++k) out(k + l, k) = lo(k);
        if (l == 0) continue;
        const Vector up = b.transpose().cast<Complex>() * upper;
        for (Index k = 0; k < b.cols(); ++k) out(k, k + l) = up(k);
    }
    return out;
}

Matrix ClassicalNoiseKernel::apply(const Vector& psi) const {
    return apply(Matrix(psi * psi.adjoint()));
}

std::vector<double> fock_output_eigenvalues(Index k, double n, Index dim) {
    check_nonneg(n, "classical noise n");
    if (k < 0 || dim <= 0) throw DomainError("fock_output_eigenvalues: bad index or dimension");
    std::vector<double> lambda(uz(dim), 0.0);
    if (n == 0.0) {
        if (k < dim) lambda[uz(k)] = 1.0;
        return lambda;
    }
    // lambda_i = sum_j C(i,j) C(k,j) n^{k+i-2j} / (n+1)^{k+i+1}
    const double ln_n = std::log(n);
    const double ln_1pn = std::log1p(n);
    for (Index i = 0; i < dim; ++i) {
        double top = -std::numeric_limits<double>::infinity();
        std::vector<double> terms;
        for (Index j = 0; j <= std::min(i, k); ++j) {
            const double t = log_binomial(uz(i), uz(j)) + log_binomial(uz(k), uz(j)) +
                             static_cast<double>(k + i - 2 * j) * ln_n;
            terms.push_back(t);
            top = std::max(top, t);
        }
        double sum = 0.0;
        for (double t : terms) sum += std::exp(t - top);
        lambda[uz(i)] = std::exp(top + std::log(sum) - static_cast<double>(k + i + 1) * ln_1pn);
    }
    return lambda;
}

// ---------------------------------------------------------------- channels

DensityMatrix apply_classical_noise(const DensityMatrix& rho, double n, ClassicalMethod method,
                                    const ChannelOptions& opts) {
    check_nonneg(n, "classical noise n");
    const Index out_dim = out_dim_for(opts, rho.dim());
    return finish(classical_linear(rho.entries(), n, out_dim, method), rho.trace(), opts, "apply_classical_noise");
}

DensityMatrix pure_state_output_matrix(const FockVector& psi, double n, Index out_dim, const ChannelOptions& opts) {
    check_nonneg(n, "classical noise n");
    const Index d = out_dim > 0 ? out_dim : out_dim_for(opts, psi.dim());
    const Matrix out = n == 0.0 ? resized(psi.amps() * psi.amps().adjoint(), d)
                                : ClassicalNoiseKernel(n, psi.dim(), d).apply(psi.amps());
    return finish(out, 1.0, opts, "pure_state_output_matrix");
}

DensityMatrix apply_thermal_noise(const DensityMatrix& rho, double eta, double N, ThermalMethod method,
                                  const ChannelOptions& opts) {
    check_unit(eta, "transmissivity eta");
    check_nonneg(N, "thermal photon number N");
    const Index out_dim = out_dim_for(opts, rho.dim());
    return finish(thermal_linear(rho.entries(), eta, N, out_dim, method, opts.classical), rho.trace(), opts,
                  "apply_thermal_noise");
}

DensityMatrix apply_pure_loss(const DensityMatrix& rho, double eta, const ChannelOptions& opts) {
    return apply_thermal_noise(rho, eta, 0.0, ThermalMethod::Dilation, opts);
}

DensityMatrix apply_amplifier(const DensityMatrix& rho, double kappa, const ChannelOptions& opts) {
    validate(Amplifier{kappa});
    const Index out_dim = out_dim_for(opts, rho.dim());
    const Matrix out = kappa == 1.0 ? resized(rho.entries(), out_dim) : amplifier_apply(rho.entries(), kappa, out_dim);
    return finish(out, rho.trace(), opts, "apply_amplifier");
}

Matrix apply_linear(const ChannelSpec& spec, const Matrix& x, Index out_dim, const ChannelOptions& opts) {
    validate(spec);
    require_square(x, "apply_linear");
    if (out_dim <= 0) throw DomainError("apply_linear: output dimension must be positive");
    return std::visit(
        [&](const auto& ch) -> Matrix {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, ClassicalNoise>) {
                return classical_linear(x, ch.n, out_dim, opts.classical);
            } else if constexpr (std::is_same_v<T, ThermalNoise>) {
                return thermal_linear(x, ch.eta, ch.N, out_dim, opts.thermal, opts.classical);
            } else if constexpr (std::is_same_v<T, PureLoss>) {
                return thermal_linear(x, ch.eta, 0.0, out_dim, ThermalMethod::Dilation, opts.classical);
            } else {
                return ch.kappa == 1.0 ? resized(x, out_dim) : amplifier_apply(x, ch.kappa, out_dim);
            }
        },
        spec);
}

DensityMatrix apply_channel(const ChannelSpec& spec, const DensityMatrix& rho, const ChannelOptions& opts) {
    const Index out_dim = out_dim_for(opts, rho.dim());
    return finish(apply_linear(spec, rho.entries(), out_dim, opts), rho.trace(), opts, "apply_channel");
}

DensityMatrix apply_channel_adaptive(const ChannelSpec& spec, const DensityMatrix& rho, const ChannelOptions& opts,
                                     double tail, Index max_dim) {
    Index d = opts.output_dim > 0 ? opts.output_dim : rho.dim() + 40;
    auto upper_weight = [](const Matrix& m) { return m.diagonal().real().tail(m.rows() - m.rows() / 2).sum(); };
    Matrix out = apply_linear(spec, rho.entries(), d, opts);
    // The lost trace is not a usable stopping signal: the thermal dilation carries its own 1e-10 cut.
    while (upper_weight(out) > tail && d < max_dim) {
        d = std::min(2 * d, max_dim);
        out = apply_linear(spec, rho.entries(), d, opts);
    }
    return DensityMatrix::from_channel_output(out);
}

Matrix dual_map(const ChannelSpec& spec, const Matrix& a, Index in_dim, const ChannelOptions& opts) {
    validate(spec);
    require_square(a, "dual_map");
    const Index d = in_dim > 0 ? in_dim : a.rows();
    return std::visit(
        [&](const auto& ch) -> Matrix {
            using T = std::decay_t<decltype(ch)>;
            if constexpr (std::is_same_v<T, ClassicalNoise>) {
                return classical_dual(a, ch.n, d, opts.classical);
            } else if constexpr (std::is_same_v<T, ThermalNoise>) {
                return thermal_dual(a, ch.eta, ch.N, d, opts.thermal, opts.classical);
            } else if constexpr (std::is_same_v<T, PureLoss>) {
                return thermal_dual(a, ch.eta, 0.0, d, ThermalMethod::Dilation, opts.classical);
            } else {
                return ch.kappa == 1.0 ? resized(a, d) : amplifier_dual(a, ch.kappa, d);
            }
        },
        spec);
}

// ------------------------------------------------------ composition rules

std::string to_string(CompositionRule rule) {
    switch (rule) {
        case CompositionRule::NN: return "NN";
        case CompositionRule::EE: return "EE";
        case CompositionRule::NE_decomp: return "NE_decomp";
        case CompositionRule::EN_decomp: return "EN_decomp";
        case CompositionRule::amp_loss: return "amp_loss";
        case CompositionRule::loss_amp: return "loss_amp";
        case CompositionRule::amp_thermal: return "amp_thermal";
    }
    return "unknown";
}

std::optional<CompositionRule> composition_rule_from_string(const std::string& name) {
    for (auto r : {CompositionRule::NN, CompositionRule::EE, CompositionRule::NE_decomp, CompositionRule::EN_decomp,
                   CompositionRule::amp_loss, CompositionRule::loss_amp, CompositionRule::amp_thermal})
        if (to_string(r) == name) return r;
    return std::nullopt;
}

double composed_thermal_photons(double eta1, double N1, double eta2, double N2) {
    check_unit(eta1, "eta1");
    check_unit(eta2, "eta2");
    check_nonneg(N1, "N1");
    check_nonneg(N2, "N2");
    const double den = 1.0 - eta1 * eta2;
    if (den == 0.0) return 0.0;  // both maps are the identity
    return (eta2 * (1.0 - eta1) * N1 + (1.0 - eta2) * N2) / den;
}

double verify_composition(CompositionRule rule, const CompositionParams& p, const std::vector<DensityMatrix>& probes,
                          const CompositionOptions& opts) {
    if (opts.compare_dim <= 0 || opts.compare_dim > opts.work_dim)
        throw DomainError("verify_composition: compare_dim must lie in [1, work_dim]");
    ChannelOptions co;
    co.classical = opts.classical;
    co.thermal = opts.thermal;
    const Index W = opts.work_dim;

    auto run = [&](const std::vector<ChannelSpec>& chain, const Matrix& x) {
        Matrix cur = x;
        for (const auto& ch : chain) cur = apply_linear(ch, cur, W, co);
        return cur;
    };

    std::vector<ChannelSpec> lhs, rhs;
    switch (rule) {
        case CompositionRule::NN:
            lhs = {ClassicalNoise{p.n1}, ClassicalNoise{p.n2}};
            rhs = {ClassicalNoise{p.n1 + p.n2}};
            break;
        case CompositionRule::EE:
            lhs = {ThermalNoise{p.eta1, p.N1}, ThermalNoise{p.eta2, p.N2}};
            rhs = {ThermalNoise{p.eta1 * p.eta2, composed_thermal_photons(p.eta1, p.N1, p.eta2, p.N2)}};
            break;
        case CompositionRule::NE_decomp:
            lhs = {ThermalNoise{p.eta, p.N}};
            rhs = {PureLoss{p.eta}, ClassicalNoise{(1.0 - p.eta) * p.N}};
            break;
        case CompositionRule::EN_decomp:
            if (!(p.eta > 0.0)) throw DomainError("EN_decomp requires eta > 0");
            lhs = {ThermalNoise{p.eta, p.N}};
            rhs = {ClassicalNoise{(1.0 - p.eta) * p.N / p.eta}, PureLoss{p.eta}};
            break;
        case CompositionRule::amp_loss:
            if (!(p.eta > 0.0 && p.eta <= 1.0)) throw DomainError("amp_loss requires 0 < eta <= 1");
            lhs = {ClassicalNoise{(1.0 - p.eta) / p.eta}};
            rhs = {PureLoss{p.eta}, Amplifier{1.0 / p.eta}};
            break;
        case CompositionRule::loss_amp:
            if (!(p.n_prime > 0.0 && p.n_prime < 1.0 && p.n_prime <= p.n))
                throw DomainError("loss_amp requires 0 < n' < 1 and n' <= n");
            lhs = {ClassicalNoise{p.n}};
            rhs = {Amplifier{1.0 / (1.0 - p.n_prime)}, ThermalNoise{1.0 - p.n_prime, (p.n - p.n_prime) / p.n_prime}};
            break;
        case CompositionRule::amp_thermal: {
            if (!(p.eta_prime > 0.0 && p.eta_prime < 1.0 && p.eta_prime <= p.eta && p.eta <= 1.0))
                throw DomainError("amp_thermal requires 0 < eta' < 1 and eta' <= eta <= 1");
            const double Np = ((1.0 - p.eta) * p.N + p.eta_prime - p.eta) / (1.0 - p.eta_prime);
            if (Np < 0.0) throw DomainError("amp_thermal requires (1-eta)N >= eta - eta'");
            lhs = {ThermalNoise{p.eta, p.N}};
            rhs = {Amplifier{p.eta / p.eta_prime}, ThermalNoise{p.eta_prime, Np}};
            break;
        }
    }
    for (const auto& ch : lhs) validate(ch);
    for (const auto& ch : rhs) validate(ch);

    double worst = 0.0;
    const Index C = opts.compare_dim;
    for (const auto& probe : probes) {
        if (probe.dim() > W) throw DomainError("verify_composition: probe larger than work_dim");
        const Matrix a = run(lhs, probe.entries());
        const Matrix b = run(rhs, probe.entries());
        worst = std::max(worst, trace_norm(a.topLeftCorner(C, C) - b.topLeftCorner(C, C)));
    }
    return worst;
}

// ------------------------------------------------- local-minimum machinery

std::optional<Matrix> local_minimum_operator(const ChannelSpec& spec, const DensityMatrix& sigma0,
                                             const ChannelOptions& opts) {
    ChannelOptions relaxed = opts;
    relaxed.allow_truncation = true;
    const DensityMatrix out = apply_channel(spec, sigma0, relaxed);
    const Matrix& m = out.entries();
    Matrix log_out;
    const Matrix off = m - Matrix(m.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() == 0.0) {
        // Exactly diagonal (number-state inputs): the entries are the eigenvalues with full relative
        // precision, so only a nonpositive entry is a support violation.
        log_out = Matrix::Zero(m.rows(), m.cols());
        for (Index i = 0; i < m.rows(); ++i) {
            const double v = m(i, i).real();
            if (!(v >= std::numeric_limits<double>::min())) return std::nullopt;
            log_out(i, i) = std::log(v);
        }
    } else {
        if (spectrum(out).eigenvalues.back() <= tol::support) return std::nullopt;
        log_out = hermitian_function(m, [](double v) { return std::log(v); });
    }
    return Matrix(-dual_map(spec, log_out, sigma0.dim(), opts));
}

EntropyDecomposition entropy_decomposition_check(const FockVector& psi, const ChannelSpec& spec,
                                                 const ChannelOptions& opts) {
    validate(spec);
    double zeta = 1.0;
    if (const auto* t = std::get_if<ThermalNoise>(&spec)) zeta = t->eta;
    else if (!std::holds_alternative<ClassicalNoise>(spec))
        throw DomainError("entropy_decomposition_check: only classical and thermal noise are supported");
    const double M = vacuum_output_photons(spec);
    if (!(M > 0.0)) throw DomainError("entropy_decomposition_check: the vacuum output must be mixed (M > 0)");

    const DensityMatrix image = apply_channel_adaptive(spec, psi.projector(), opts);

    EntropyDecomposition r;
    r.mean_photons = psi.mean_photons();
    r.output_entropy = von_neumann_entropy(spectrum(image));
    r.relative_entropy = relative_entropy_to_thermal(image, M);
    r.gap = zeta * r.mean_photons * std::log((M + 1.0) / M) - r.relative_entropy;
    r.predicted_entropy = g_function(M) + r.gap;
    r.residual = std::abs(r.output_entropy - r.predicted_entropy);
    return r;
}

}  // namespace boson
