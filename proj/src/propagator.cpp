#include "soclattice/propagator.hpp"

#include "soclattice/errors.hpp"
#include "soclattice/parallel.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace soclattice {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Hop {
    int row;
    int col;
    double amplitude;  // real matrix element of the hopping Hamiltonian
};

// Nonzero hopping elements of the amplitude equations, open boundaries.
std::vector<Hop> hopping_entries(const LatticeParams& p) {
    const int h = p.half_width();
    const double vc = p.hopping * std::cos(p.soc_angle);
    const double vs = p.hopping * std::sin(p.soc_angle);
    std::vector<Hop> hops;
    auto add = [&](int n, Spin s, int m, Spin r, double value) {
        if (m < -h || m > h || std::abs(value) < 1e-14 * p.hopping) return;
        hops.push_back({state_index(p, n, s), state_index(p, m, r), value});
    };
    for (int n = -h; n <= h; ++n) {
        add(n, Spin::up, n + 1, Spin::up, -vc);
        add(n, Spin::up, n - 1, Spin::up, -vc);
        add(n, Spin::up, n + 1, Spin::down, vs);
        add(n, Spin::up, n - 1, Spin::down, -vs);
        add(n, Spin::down, n + 1, Spin::down, -vc);
        add(n, Spin::down, n - 1, Spin::down, -vc);
        add(n, Spin::down, n + 1, Spin::up, -vs);
        add(n, Spin::down, n - 1, Spin::up, vs);
    }
    return hops;
}

// Time-dependent coefficients of the generator A(t) = -i H(t) in the chosen
// frame, evaluated once per stage time and shared by every column.
class Generator {
public:
    Generator(const LatticeParams& p, IntegrationFrame frame)
        : p_(p), frame_(frame), hops_(hopping_entries(p)), offdiag_(hops_.size()),
          diag_(p.dimension()), phase_(p.dimension()) {}

    void evaluate(double t) {
        if (frame_ == IntegrationFrame::rotating) {
            // e^{i theta_j} built from a few exponentials and integer powers
            const int h = p_.half_width();
            const cplx drive = std::polar(1.0, drive_phase(t, p_));
            const cplx spin_half = std::polar(1.0, 0.5 * p_.zeeman * t);
            const cplx impurity = std::polar(1.0, p_.impurity * t);
            cplx site = std::pow(std::conj(drive), h);
            for (int n = -h; n <= h; ++n) {
                const cplx base = n == 0 ? impurity : cplx(1.0);
                phase_[state_index(p_, n, Spin::up)] = site * spin_half * base;
                phase_[state_index(p_, n, Spin::down)] = site * std::conj(spin_half) * base;
                site *= drive;
            }
            for (std::size_t e = 0; e < hops_.size(); ++e) {
                const Hop& hop = hops_[e];
                offdiag_[e] = -kI * hop.amplitude * phase_[hop.row] * std::conj(phase_[hop.col]);
            }
        } else {
            const double field = drive_field(t, p_);
            for (int i = 0; i < p_.dimension(); ++i) {
                const int n = site_of(p_, i);
                const double onsite = field * n + (n == 0 ? p_.impurity : 0.0) +
                                      spin_sign(spin_of(i)) * 0.5 * p_.zeeman;
                diag_[i] = -kI * onsite;
            }
            for (std::size_t e = 0; e < hops_.size(); ++e) offdiag_[e] = -kI * hops_[e].amplitude;
        }
    }

    // out = A(t) in, column blocks stored state-major: x[state * cols + c]
    void apply(const std::vector<cplx>& in, std::vector<cplx>& out, int cols) const {
        const int dim = p_.dimension();
        if (frame_ == IntegrationFrame::lab) {
            for (int i = 0; i < dim; ++i)
                for (int c = 0; c < cols; ++c) out[i * cols + c] = diag_[i] * in[i * cols + c];
        } else {
            std::fill(out.begin(), out.end(), cplx(0.0));
        }
        for (std::size_t e = 0; e < hops_.size(); ++e) {
            const cplx coef = offdiag_[e];
            const cplx* src = &in[hops_[e].col * cols];
            cplx* dst = &out[hops_[e].row * cols];
            for (int c = 0; c < cols; ++c) dst[c] += coef * src[c];
        }
    }

    const std::vector<cplx>& phases() const { return phase_; }

private:
    const LatticeParams& p_;
    IntegrationFrame frame_;
    std::vector<Hop> hops_;
    std::vector<cplx> offdiag_;
    std::vector<cplx> diag_;
    std::vector<cplx> phase_;
};

// RK4 on a block of columns, in the integration frame.
class BlockStepper {
public:
    BlockStepper(const LatticeParams& p, IntegrationFrame frame, int cols)
        : gen_(p, frame), cols_(cols), size_(static_cast<std::size_t>(p.dimension()) * cols),
          k1_(size_), k2_(size_), k3_(size_), k4_(size_), tmp_(size_) {}

    void step(std::vector<cplx>& y, double t, double h) {
        gen_.evaluate(t);
        gen_.apply(y, k1_, cols_);
        gen_.evaluate(t + 0.5 * h);
        for (std::size_t i = 0; i < size_; ++i) tmp_[i] = y[i] + (0.5 * h) * k1_[i];
        gen_.apply(tmp_, k2_, cols_);
        for (std::size_t i = 0; i < size_; ++i) tmp_[i] = y[i] + (0.5 * h) * k2_[i];
        gen_.apply(tmp_, k3_, cols_);
        gen_.evaluate(t + h);
        for (std::size_t i = 0; i < size_; ++i) tmp_[i] = y[i] + h * k3_[i];
        gen_.apply(tmp_, k4_, cols_);
        const double w = h / 6.0;
        for (std::size_t i = 0; i < size_; ++i)
            y[i] += w * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    // Lab <-> integration frame. A no-op for the lab frame.
    void to_frame(std::vector<cplx>& y, double t, IntegrationFrame frame, bool forward) {
        if (frame == IntegrationFrame::lab) return;
        gen_.evaluate(t);
        const auto& ph = gen_.phases();
        for (std::size_t s = 0; s < ph.size(); ++s) {
            const cplx f = forward ? ph[s] : std::conj(ph[s]);
            for (int c = 0; c < cols_; ++c) y[s * cols_ + c] *= f;
        }
    }

private:
    Generator gen_;
    int cols_;
    std::size_t size_;
    std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

struct StepPlan {
    double h;
    long full_steps;
    double last_step;  // 0 when t1 lies on the step grid
};

StepPlan plan_steps(double t0, double t1, const IntegratorConfig& cfg, const LatticeParams& p) {
    const double h = p.period() / cfg.steps_per_period;
    const double span = t1 - t0;
    long n = static_cast<long>(std::floor(span / h + 1e-9));
    double rest = span - n * h;
    if (rest < 1e-12 * h) rest = 0.0;
    return {h, n, rest};
}

void check_interval(double t0, double t1) {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 > t0))
        throw InvalidArgument("evolve: need finite t1 > t0");
}

void check_norm(double norm0, double norm, double t, const IntegratorConfig& cfg) {
    if (std::abs(norm - norm0) > cfg.norm_tolerance) {
        std::ostringstream msg;
        msg << "norm drift " << std::abs(norm - norm0) << " at t = " << t
            << " exceeds " << cfg.norm_tolerance << "; increase steps_per_period (now "
            << cfg.steps_per_period << ")";
        throw IntegrationAccuracyError(msg.str());
    }
}

// Propagates a column block (state-major layout) from t0 to t1. on_sample is
// called with the lab-frame block at t0 and every `every` steps; the final
// state is returned in the lab frame.
template <class OnSample>
void run_block(std::vector<cplx>& y, int cols, double t0, double t1, const IntegratorConfig& cfg,
               const LatticeParams& p, long every, OnSample&& on_sample) {
    const StepPlan plan = plan_steps(t0, t1, cfg, p);
    BlockStepper stepper(p, cfg.frame, cols);
    std::vector<cplx> lab;
    auto sample = [&](double t) {
        lab = y;
        stepper.to_frame(lab, t, cfg.frame, false);
        on_sample(t, lab);
    };
    stepper.to_frame(y, t0, cfg.frame, true);
    if (every > 0) sample(t0);
    for (long k = 0; k < plan.full_steps; ++k) {
        const double t = t0 + k * plan.h;
        stepper.step(y, t, plan.h);
        if (every > 0 && (k + 1) % every == 0 && !(k + 1 == plan.full_steps && plan.last_step == 0.0))
            sample(t0 + (k + 1) * plan.h);
    }
    if (plan.last_step > 0.0) stepper.step(y, t0 + plan.full_steps * plan.h, plan.last_step);
    stepper.to_frame(y, t1, cfg.frame, false);
}

}  // namespace

void IntegratorConfig::validate() const {
    if (steps_per_period < 1) throw InvalidArgument("steps_per_period must be positive");
    if (samples_per_period < 1 || steps_per_period % samples_per_period != 0)
        throw InvalidArgument("samples_per_period must divide steps_per_period");
    if (!(norm_tolerance > 0.0)) throw InvalidArgument("norm_tolerance must be positive");
}

Trajectory evolve(const SpinorWavefunction& psi0, double t0, double t1,
                  const IntegratorConfig& cfg, const LatticeParams& params) {
    params.validate();
    cfg.validate();
    check_interval(t0, t1);
    if (psi0.amplitudes().size() != params.dimension())
        throw InvalidArgument("evolve: state dimension does not match lattice");

    Trajectory traj;
    traj.params = params;
    const double norm0 = psi0.norm_squared();
    const int dim = params.dimension();
    std::vector<cplx> y(psi0.amplitudes().data(), psi0.amplitudes().data() + dim);
    const long every = cfg.steps_per_period / cfg.samples_per_period;
    run_block(y, 1, t0, t1, cfg, params, every, [&](double t, const std::vector<cplx>& lab) {
        Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(lab.data(), dim);
        check_norm(norm0, v.squaredNorm(), t, cfg);
        traj.times.push_back(t);
        traj.states.push_back(std::move(v));
    });
    Eigen::VectorXcd last = Eigen::Map<const Eigen::VectorXcd>(y.data(), dim);
    check_norm(norm0, last.squaredNorm(), t1, cfg);
    traj.times.push_back(t1);
    traj.states.push_back(std::move(last));
    return traj;
}

Eigen::VectorXcd propagate(const Eigen::VectorXcd& psi0, double t0, double t1,
                           const IntegratorConfig& cfg, const LatticeParams& params) {
    params.validate();
    cfg.validate();
    check_interval(t0, t1);
    if (psi0.size() != params.dimension())
        throw InvalidArgument("propagate: state dimension does not match lattice");
    std::vector<cplx> y(psi0.data(), psi0.data() + psi0.size());
    run_block(y, 1, t0, t1, cfg, params, 0, [](double, const std::vector<cplx>&) {});
    Eigen::VectorXcd out = Eigen::Map<const Eigen::VectorXcd>(y.data(), psi0.size());
    check_norm(psi0.squaredNorm(), out.squaredNorm(), t1, cfg);
    return out;
}

double MonodromyMatrix::unitarity_defect() const {
    const Eigen::MatrixXcd d =
        entries.adjoint() * entries - Eigen::MatrixXcd::Identity(entries.rows(), entries.cols());
    return d.cwiseAbs().maxCoeff();
}

MonodromyMatrix monodromy(const LatticeParams& params, const IntegratorConfig& cfg, int threads) {
    params.validate();
    cfg.validate();
    const int dim = params.dimension();
    const int chunks = std::max(1, std::min(threads, dim));
    MonodromyMatrix u{Eigen::MatrixXcd(dim, dim), params};
    const double period = params.period();

    parallel_for(chunks, chunks, [&](std::size_t chunk) {
        const int first = static_cast<int>(chunk * dim / chunks);
        const int last = static_cast<int>((chunk + 1) * dim / chunks);
        const int cols = last - first;
        std::vector<cplx> y(static_cast<std::size_t>(dim) * cols, cplx(0.0));
        for (int c = 0; c < cols; ++c) y[(first + c) * cols + c] = 1.0;
        run_block(y, cols, 0.0, period, cfg, params, 0, [](double, const std::vector<cplx>&) {});
        for (int c = 0; c < cols; ++c) {
            double norm = 0.0;
            for (int s = 0; s < dim; ++s) {
                u.entries(s, first + c) = y[s * cols + c];
                norm += std::norm(y[s * cols + c]);
            }
            check_norm(1.0, norm, period, cfg);
        }
    });
    return u;
}

}  // namespace soclattice
