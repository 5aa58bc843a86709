#include "soclattice/errors.hpp"
#include "soclattice/lattice_model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace soclattice;

namespace {

const cplx I{0.0, 1.0};

// H(t) written out entry by entry from the amplitude equations.
Eigen::MatrixXcd dense_hamiltonian(double t, const LatticeParams& p) {
    const int h = p.half_width();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(p.dimension(), p.dimension());
    const double c = std::cos(p.soc_angle), s = std::sin(p.soc_angle), v = p.hopping;
    auto idx = [&](int n, int spin) { return 2 * (n + h) + spin; };
    for (int n = -h; n <= h; ++n) {
        const double onsite = p.drive_amplitude * std::cos(p.drive_frequency * t) * n +
                              (n == 0 ? p.impurity : 0.0);
        H(idx(n, 0), idx(n, 0)) = onsite + p.zeeman / 2;
        H(idx(n, 1), idx(n, 1)) = onsite - p.zeeman / 2;
        if (n + 1 <= h) {
            H(idx(n, 0), idx(n + 1, 0)) += -v * c;
            H(idx(n, 0), idx(n + 1, 1)) += v * s;
            H(idx(n, 1), idx(n + 1, 1)) += -v * c;
            H(idx(n, 1), idx(n + 1, 0)) += -v * s;
        }
        if (n - 1 >= -h) {
            H(idx(n, 0), idx(n - 1, 0)) += -v * c;
            H(idx(n, 0), idx(n - 1, 1)) += -v * s;
            H(idx(n, 1), idx(n - 1, 1)) += -v * c;
            H(idx(n, 1), idx(n - 1, 0)) += v * s;
        }
    }
    return H;
}

Eigen::VectorXcd random_state(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v[i] = cplx(g(rng), g(rng));
    return v.normalized();
}

LatticeParams driven(double alpha) {
    LatticeParams p;
    p.soc_angle = alpha;
    p.drive_amplitude = 2.405 * 20.0;
    p.impurity = 24.0;
    return p;
}

}  // namespace

TEST_CASE("default parameters") {
    const LatticeParams p;
    CHECK(p.n_sites == 21);
    CHECK(p.hopping == 1.0);
    CHECK(p.drive_frequency == 20.0);
    CHECK(p.zeeman == 20.0);
    CHECK(p.dimension() == 42);
    CHECK(p.half_width() == 10);
    CHECK(p.period() == doctest::Approx(2.0 * std::numbers::pi / 20.0));
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("validate rejects bad lattices") {
    LatticeParams p;
    p.n_sites = 20;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p.n_sites = 1;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = LatticeParams{};
    p.hopping = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = LatticeParams{};
    p.drive_frequency = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = LatticeParams{};
    p.impurity = std::nan("");
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
}

TEST_CASE("state indexing round trip") {
    const LatticeParams p;
    for (int n = -10; n <= 10; ++n)
        for (Spin s : {Spin::up, Spin::down}) {
            const int k = state_index(p, n, s);
            CHECK(site_of(p, k) == n);
            CHECK(spin_of(k) == s);
        }
    const auto psi = SpinorWavefunction::basis(p, -1, Spin::up);
    CHECK(psi.probability(-1, Spin::up) == 1.0);
    CHECK(psi.norm_squared() == 1.0);
    CHECK_THROWS_AS(SpinorWavefunction::basis(p, 11, Spin::up), OutOfRange);
    CHECK_THROWS_AS(SpinorWavefunction(p, Eigen::VectorXcd::Zero(40)), InvalidArgument);
}

TEST_CASE("hopping kind predicates") {
    LatticeParams p;
    CHECK(is_spin_conserving(p));
    CHECK_FALSE(is_spin_flipping(p));
    p.soc_angle = std::numbers::pi / 2;
    CHECK(is_spin_flipping(p));
    CHECK_FALSE(is_spin_conserving(p));
    p.soc_angle = 0.3;
    CHECK_FALSE(is_spin_flipping(p));
    CHECK_FALSE(is_spin_conserving(p));
}

TEST_CASE("apply_hamiltonian equals the dense-matrix oracle") {
    for (double alpha : {0.0, std::numbers::pi / 2, 0.7}) {
        const LatticeParams p = driven(alpha);
        const Eigen::VectorXcd psi = random_state(p.dimension(), 7);
        for (double t : {0.0, 0.0123, 0.2, 1.7}) {
            const Eigen::MatrixXcd H = dense_hamiltonian(t, p);
            CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() == 0.0);
            const Eigen::VectorXcd ref = -I * (H * psi);
            const double err = (apply_hamiltonian(t, psi, p) - ref).cwiseAbs().maxCoeff();
            CHECK(err <= 1e-13);
        }
    }
}

TEST_CASE("drive field and phase") {
    const LatticeParams p = driven(0.0);
    for (double t : {0.0, 0.05, 0.3}) {
        CHECK(drive_field(t, p) == doctest::Approx(p.drive_amplitude * std::cos(20.0 * t)));
        CHECK(drive_phase(t, p) == doctest::Approx(2.405 * std::sin(20.0 * t)));
    }
}

TEST_CASE("frame phases and their round trip") {
    const LatticeParams p = driven(0.7);
    const double t = 0.37;
    const Eigen::VectorXd theta = frame_phases(t, p);
    for (int k = 0; k < p.dimension(); ++k) {
        const int n = site_of(p, k);
        const double expected = n * drive_phase(t, p) + spin_sign(spin_of(k)) * p.zeeman * t / 2 +
                                (n == 0 ? p.impurity * t : 0.0);
        CHECK(theta[k] == doctest::Approx(expected).epsilon(1e-14));
    }
    const SpinorWavefunction psi(p, random_state(p.dimension(), 3));
    const RotatingFrameState b = to_rotating_frame(psi, t, p);
    CHECK(b.time == t);
    const SpinorWavefunction back = from_rotating_frame(b, p);
    CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rotating generator is the lab equation seen through the frame") {
    for (double alpha : {0.0, std::numbers::pi / 2, 1.1}) {
        const LatticeParams p = driven(alpha);
        const Eigen::VectorXcd a = random_state(p.dimension(), 11);
        for (double t : {0.0, 0.09, 0.8}) {
            const Eigen::VectorXd theta = frame_phases(t, p);
            Eigen::VectorXcd b(a.size()), expected(a.size());
            const Eigen::VectorXcd adot = apply_hamiltonian(t, a, p);
            for (int k = 0; k < a.size(); ++k) {
                const int n = site_of(p, k);
                const double rate = n * drive_field(t, p) +
                                    spin_sign(spin_of(k)) * p.zeeman / 2 +
                                    (n == 0 ? p.impurity : 0.0);
                const cplx phase = std::polar(1.0, theta[k]);
                b[k] = phase * a[k];
                expected[k] = I * rate * b[k] + phase * adot[k];
            }
            const double err = (apply_rotating_generator(t, b, p) - expected).cwiseAbs().maxCoeff();
            CHECK(err < 1e-12);
        }
    }
}

TEST_CASE("spin-conserving hopping never feeds the opposite spin") {
    const LatticeParams p = driven(0.0);
    Eigen::VectorXcd psi = random_state(p.dimension(), 5);
    for (int k = 1; k < psi.size(); k += 2) psi[k] = 0.0;
    const Eigen::VectorXcd d = apply_hamiltonian(0.2, psi, p);
    for (int k = 1; k < d.size(); k += 2) CHECK(d[k] == cplx(0.0, 0.0));
}

TEST_CASE("spin-flipping hopping keeps (-1)^n times spin sign") {
    // With cos alpha = 0 a hop flips the spin, so sites of even n carry one
    // spin and odd n the other within each invariant sector.
    const LatticeParams p = driven(std::numbers::pi / 2);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(p.dimension());
    for (int n = -10; n <= 10; ++n)
        psi[state_index(p, n, (n % 2 == 0) ? Spin::down : Spin::up)] = cplx(0.1 * n, 0.3);
    const Eigen::VectorXcd d = apply_hamiltonian(0.4, psi, p);
    for (int n = -10; n <= 10; ++n)
        CHECK(std::abs(d[state_index(p, n, (n % 2 == 0) ? Spin::up : Spin::down)]) < 1e-14);
}
