#include "kronred/simulation.hpp"

#include "kronred/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace kronred {

double eval_signal(const Signal& signal, double t) {
    struct Visitor {
        double t;
        double operator()(const Sinusoid& s) const {
            return s.amplitude * std::cos(2.0 * std::numbers::pi * s.freq_hz * t + s.phase);
        }
        double operator()(const Step& s) const { return t < s.t_step ? 0.0 : s.value; }
        double operator()(const Constant& s) const { return s.value; }
        double operator()(const Piecewise& s) const {
            double v = 0.0;
            for (const auto& [tb, vb] : s.breakpoints) {
                if (tb > t) break;
                v = vb;
            }
            return v;
        }
    };
    return std::visit(Visitor{t}, signal);
}

void check_signal(const Signal& signal) {
    if (const auto* s = std::get_if<Sinusoid>(&signal)) {
        if (!(s->freq_hz > 0.0)) throw Error(ErrorCode::InvalidArgument, "sinusoid frequency must be positive");
    }
    if (const auto* p = std::get_if<Piecewise>(&signal)) {
        for (std::size_t k = 1; k < p->breakpoints.size(); ++k) {
            if (!(p->breakpoints[k].first > p->breakpoints[k - 1].first)) {
                throw Error(ErrorCode::InvalidArgument, "piecewise breakpoints must be strictly increasing");
            }
        }
    }
}

void Excitation::eval_into(double t, Vector& out) const {
    out.resize(size());
    for (Index k = 0; k < size(); ++k) out(k) = eval_signal(signals[static_cast<std::size_t>(k)], t);
}

Vector eval_excitation(const Excitation& x, double t) {
    Vector v;
    x.eval_into(t, v);
    return v;
}

void SolverConfig::check() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
    if (!(t_end > dt) || !std::isfinite(t_end)) throw Error(ErrorCode::InvalidArgument, "t_end must exceed dt");
    if (record_stride < 1) throw Error(ErrorCode::InvalidArgument, "record_stride must be >= 1");
}

long long SolverConfig::step_count() const {
    return static_cast<long long>(std::ceil(t_end / dt - 1e-9));
}

namespace {

Index sample_count(const SolverConfig& cfg) {
    const long long n = cfg.step_count();
    return static_cast<Index>(n / cfg.record_stride + 1 + (n % cfg.record_stride != 0 ? 1 : 0));
}

// Classical RK4 with fixed step. `rhs(t, y, dydt)` must not allocate for
// speed; `record(sample, t, y)` is called at t = 0, every `record_stride`
// steps and at the final step.
template <typename Rhs, typename Record>
void integrate_rk4(Vector y, const SolverConfig& cfg, Rhs&& rhs, Record&& record) {
    const long long n = cfg.step_count();
    const double dt = cfg.dt;
    const Index dim = y.size();
    Vector k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    Index sample = 0;
    record(sample++, 0.0, y);
    for (long long step = 0; step < n; ++step) {
        const double t = static_cast<double>(step) * dt;
        rhs(t, y, k1);
        tmp = y + (0.5 * dt) * k1;
        rhs(t + 0.5 * dt, tmp, k2);
        tmp = y + (0.5 * dt) * k2;
        rhs(t + 0.5 * dt, tmp, k3);
        tmp = y + dt * k3;
        rhs(t + dt, tmp, k4);
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const long long done = step + 1;
        if (done % cfg.record_stride == 0 || done == n) {
            record(sample++, static_cast<double>(done) * dt, y);
        }
    }
}

void check_excitation(const Excitation& x, Index boundary) {
    if (x.size() != boundary) {
        throw Error(ErrorCode::DimensionMismatch, "excitation has " + std::to_string(x.size()) +
                                                      " signals for " + std::to_string(boundary) +
                                                      " boundary nodes");
    }
    for (const auto& s : x.signals) check_signal(s);
}

}  // namespace

Trajectory simulate_reduced(const ReducedModel& model, const Excitation& x, const Vector& f0,
                            const SolverConfig& cfg) {
    cfg.check();
    check_excitation(x, model.boundary_count());
    const Vector fhat0 = embed_initial(model.P, f0);
    const Index m = model.order();

    Matrix decay(m, m);
    Matrix drive(m, model.boundary_count());
    if (m > 0) {
        // Partial-pivot LU rather than Cholesky so that models built from
        // non-passive synthesized networks can still be integrated.
        Eigen::PartialPivLU<Matrix> lu(model.Lhat);
        decay = lu.solve(model.Rhat);
        drive = lu.solve(Matrix(model.Bhat.transpose()));
    }

    const Index samples = sample_count(cfg);
    Trajectory traj;
    traj.times.resize(static_cast<std::size_t>(samples));
    traj.fhat.resize(samples, m);
    traj.f.resize(samples, model.edge_count());
    traj.i1.resize(samples, model.boundary_count());

    Vector v1(model.boundary_count());
    auto rhs = [&](double t, const Vector& y, Vector& dy) {
        x.eval_into(t, v1);
        dy.noalias() = drive * v1;
        dy.noalias() -= decay * y;
    };
    auto record = [&](Index s, double t, const Vector& y) {
        traj.times[static_cast<std::size_t>(s)] = t;
        traj.fhat.row(s) = y.transpose();
        traj.f.row(s) = (model.P * y).transpose();
        traj.i1.row(s) = (model.Bhat * y).transpose();
    };
    integrate_rk4(fhat0, cfg, rhs, record);
    return traj;
}

Trajectory simulate_dae_oracle(const ValidatedNetwork& network, const Excitation& x, const Vector& f0,
                               const SolverConfig& cfg) {
    cfg.check();
    check_excitation(x, network.boundary_count());
    const Index edges = network.edge_count();
    if (f0.size() != edges) throw Error(ErrorCode::DimensionMismatch, "f0 length != edge count");

    const Matrix B = build_incidence(network).as_real();
    const Index nb = network.boundary_count();
    const Index n0 = network.interior_count();
    const Matrix B1 = B.topRows(nb);
    const Matrix B0 = B.bottomRows(n0);
    const Vector r = network.resistances();
    const Vector l_inv = network.inductances().cwiseInverse();

    const double initial_defect = n0 > 0 ? (B0 * f0).norm() : 0.0;
    if (initial_defect > 1e-9 * f0.norm()) {
        throw Error(ErrorCode::InconsistentInitialCondition, "initial flows violate KCL at interior nodes", {},
                    initial_defect);
    }

    // B0 L^{-1} B0^T is constant; factor once.
    const Matrix b0_linv = B0 * l_inv.asDiagonal();
    Eigen::LLT<Matrix> interior_gram;
    if (n0 > 0) {
        interior_gram.compute(b0_linv * B0.transpose());
        if (interior_gram.info() != Eigen::Success) {
            throw Error(ErrorCode::NotPositiveDefinite, "B0 L^{-1} B0^T is not positive definite");
        }
    }

    const Index samples = sample_count(cfg);
    Trajectory traj;
    traj.times.resize(static_cast<std::size_t>(samples));
    traj.f.resize(samples, edges);
    traj.i1.resize(samples, nb);
    traj.v0.resize(samples, n0);

    Vector v1(nb);
    Vector v0(n0);
    Vector drop(edges);  // B^T v - R f, the voltage across each edge's inductor
    auto interior_voltages = [&](const Vector& f) {
        if (n0 == 0) return;
        drop.noalias() = r.cwiseProduct(f);
        drop.noalias() -= B1.transpose() * v1;
        v0.noalias() = b0_linv * drop;
        interior_gram.solveInPlace(v0);
    };
    auto rhs = [&](double t, const Vector& f, Vector& df) {
        x.eval_into(t, v1);
        interior_voltages(f);
        drop.noalias() = B1.transpose() * v1;
        if (n0 > 0) drop.noalias() += B0.transpose() * v0;
        drop -= r.cwiseProduct(f);
        df = l_inv.cwiseProduct(drop);
    };
    auto record = [&](Index s, double t, const Vector& f) {
        const double drift = n0 > 0 ? (B0 * f).norm() : 0.0;
        if (drift > 1e-7 * f.norm() && drift > 1e-14) {
            throw Error(ErrorCode::ConstraintDrift, "KCL drift at t = " + std::to_string(t), {}, drift);
        }
        x.eval_into(t, v1);
        interior_voltages(f);
        traj.times[static_cast<std::size_t>(s)] = t;
        traj.f.row(s) = f.transpose();
        traj.i1.row(s) = (B1 * f).transpose();
        traj.v0.row(s) = v0.transpose();
    };
    integrate_rk4(f0, cfg, rhs, record);
    return traj;
}

Trajectory simulate_homogeneous(const HomogeneousReducedModel& model, const Excitation& x, const Vector& i1_0,
                                const SolverConfig& cfg) {
    cfg.check();
    const Index nb = model.Lred.rows();
    check_excitation(x, nb);
    if (i1_0.size() != nb) throw Error(ErrorCode::DimensionMismatch, "i1(0) length != boundary count");

    const Index samples = sample_count(cfg);
    Trajectory traj;
    traj.times.resize(static_cast<std::size_t>(samples));
    traj.i1.resize(samples, nb);

    Vector v1(nb);
    auto rhs = [&](double t, const Vector& i, Vector& di) {
        x.eval_into(t, v1);
        di.noalias() = model.Lred * v1;
        di -= model.alpha * i;
    };
    auto record = [&](Index s, double t, const Vector& i) {
        traj.times[static_cast<std::size_t>(s)] = t;
        traj.i1.row(s) = i.transpose();
    };
    integrate_rk4(i1_0, cfg, rhs, record);
    return traj;
}

SteadyPhasors extract_steady_phasors(const std::vector<double>& times, const Matrix& samples, double freq_hz,
                                     double periods) {
    if (!(freq_hz > 0.0) || !(periods > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "frequency and period count must be positive");
    }
    if (static_cast<Index>(times.size()) != samples.rows() || times.size() < 2) {
        throw Error(ErrorCode::InsufficientWindow, "trajectory has too few samples");
    }
    const double period = 1.0 / freq_hz;
    const double span = times.back() - times.front();
    if (span < (periods + 2.0) * period * (1.0 - 1e-9)) {
        throw Error(ErrorCode::InsufficientWindow, "trajectory covers fewer than periods + 2 full periods", {},
                    span / period);
    }
    const double start = times.back() - periods * period * (1.0 + 1e-12);
    std::size_t first = 0;
    while (times[first] < start) ++first;
    const Index count = static_cast<Index>(times.size() - first);
    if (count < 3) throw Error(ErrorCode::InsufficientWindow, "window holds fewer than 3 samples");

    const double omega = 2.0 * std::numbers::pi * freq_hz;
    Matrix basis(count, 2);
    for (Index k = 0; k < count; ++k) {
        const double t = times[first + static_cast<std::size_t>(k)];
        basis(k, 0) = std::cos(omega * t);
        basis(k, 1) = -std::sin(omega * t);
    }
    const Eigen::ColPivHouseholderQR<Matrix> qr(basis);

    SteadyPhasors out;
    for (Index c = 0; c < samples.cols(); ++c) {
        const Vector y = samples.col(c).tail(count);
        const Vector ab = qr.solve(y);
        const double energy = y.squaredNorm();
        out.phasors.push_back(Phasor::from_complex({ab(0), ab(1)}));
        out.residual.push_back(energy > 0.0 ? (y - basis * ab).squaredNorm() / energy : 0.0);
    }
    return out;
}

Deviation compare_series(const std::vector<double>& times, const Matrix& candidate, const Matrix& reference,
                         double from_time) {
    if (candidate.rows() != reference.rows() || candidate.cols() != reference.cols() ||
        static_cast<Index>(times.size()) != reference.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "compared series differ in shape");
    }
    if (reference.cols() == 0) return {};
    auto ratio = [](double num, double den) {
        if (num == 0.0) return 0.0;
        return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
    };
    double diff_all = 0.0, ref_all = 0.0, diff_tail = 0.0, ref_tail = 0.0;
    for (Index s = 0; s < reference.rows(); ++s) {
        const double d = (candidate.row(s) - reference.row(s)).cwiseAbs().maxCoeff();
        const double m = reference.row(s).cwiseAbs().maxCoeff();
        diff_all = std::max(diff_all, d);
        ref_all = std::max(ref_all, m);
        if (times[static_cast<std::size_t>(s)] >= from_time) {
            diff_tail = std::max(diff_tail, d);
            ref_tail = std::max(ref_tail, m);
        }
    }
    return {diff_all, ratio(diff_all, ref_all), ratio(diff_tail, ref_tail)};
}

}  // namespace kronred
