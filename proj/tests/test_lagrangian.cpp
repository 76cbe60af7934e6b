#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hs/datum.hpp"
#include "hs/lagrangian.hpp"
#include "support/oracles.hpp"

using namespace hs;

namespace {
const Grid kGrid = Grid::make(12.0, 4096);
const double kSqrtPiHalf = std::sqrt(0.5 * std::numbers::pi);
}  // namespace

TEST_CASE("init_state: cumulative energy and slope extrema") {
    auto zero_state = init_state(LineFunction::zero(kGrid));
    CHECK(zero_state.cumulative_energy.max_abs() == 0.0);
    CHECK(std::isinf(blowup_time(zero_state)));

    auto st = init_state(datum::gauss_antiderivative(kGrid));
    // F(+L) = int (1/2) e^{-2z^2} = sqrt(pi/2)/2
    CHECK(st.cumulative_energy.values.back() ==
          doctest::Approx(0.5 * kSqrtPiHalf).epsilon(1e-8));
    for (std::size_t i = 1; i < st.cumulative_energy.values.size(); ++i)
        CHECK(st.cumulative_energy.values[i] >= st.cumulative_energy.values[i - 1]);
    CHECK(std::isinf(blowup_time(st)));

    auto blow = init_state(datum::neg_x_gaussian(kGrid));
    CHECK(blow.min_slope == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(std::abs(kGrid.point(blow.min_slope_index)) < kGrid.spacing);
    CHECK(blowup_time(blow) == doctest::Approx(2.0).epsilon(5e-7));

    auto blow2 = init_state(datum::neg_x_gaussian(kGrid, 2.0));
    CHECK(blowup_time(blow2) == doctest::Approx(1.0).epsilon(5e-7));
}

TEST_CASE("riccati slope along characteristics") {
    // near-unit slope at the peak of the good datum: w(t) = w0/(1 + t w0/2),
    // cross-checked by an RK4 oracle for w' = -w^2/2
    auto st = init_state(datum::gauss_antiderivative(kGrid));
    int peak = 0;
    for (int i = 0; i < kGrid.n_points; ++i)
        if (st.u0x.values[i] > st.u0x.values[peak]) peak = i;
    const double w0 = st.u0x.values[peak];
    const double w2 = riccati_ux(st, kGrid.point(peak), 2.0);
    CHECK(w2 == doctest::Approx(w0 / (1.0 + w0)).epsilon(1e-14));
    CHECK(w2 == doctest::Approx(0.5).epsilon(1e-4));
    const double w_ode = oracle::scalar_rk4([](double, double w) { return -0.5 * w * w; }, w0,
                                            0.0, 2.0, 1e-4);
    CHECK(w2 == doctest::Approx(w_ode).epsilon(1e-10));

    auto zero_state = init_state(LineFunction::zero(kGrid));
    for (double t : {0.0, 1.0, 50.0}) CHECK(riccati_ux(zero_state, 0.0, t) == 0.0);

    // negative slope -1: w(1) = 2/(1-2) = -2, then a signed infinity past T*
    auto blow = init_state(datum::neg_x_gaussian(kGrid));
    const double x_m = kGrid.point(blow.min_slope_index);
    const double wm = blow.u0x.values[blow.min_slope_index];
    CHECK(riccati_ux(blow, x_m, 1.0) == doctest::Approx(wm / (1.0 + 0.5 * wm)).epsilon(1e-14));
    CHECK(riccati_ux(blow, x_m, 1.0) == doctest::Approx(-2.0).epsilon(1e-4));
    const double past = riccati_ux(blow, x_m, 2.5);
    CHECK(std::isinf(past));
    CHECK(past < 0.0);

    CHECK_THROWS_AS(riccati_ux(blow, 1e9, 0.1), std::invalid_argument);
}

TEST_CASE("snapshot: trivial flow, closed-form q_x, conservation identities") {
    auto zero_state = init_state(LineFunction::zero(kGrid));
    auto snap0 = snapshot(zero_state, 3.0);
    CHECK(snap0.valid);
    CHECK(snap0.u_along.max_abs() == 0.0);
    for (int i = 0; i < kGrid.n_points; ++i)
        CHECK(snap0.q.values[i] == doctest::Approx(kGrid.point(i)).epsilon(1e-15));

    auto st = init_state(datum::gauss_antiderivative(kGrid));
    auto snap = snapshot(st, 1.0);
    CHECK(snap.valid);

    // q_x equals the closed form and the label-space derivative of q
    auto dq = derivative(snap.q);
    double worst_qx = 0.0, worst_cons = 0.0;
    for (int i = 2; i < kGrid.n_points - 2; ++i) {
        worst_qx = std::max(worst_qx, std::abs(dq.values[i] - snap.qx.values[i]));
        const double lhs = snap.ux_along.values[i] * snap.ux_along.values[i] * snap.qx.values[i];
        const double rhs = st.u0x.values[i] * st.u0x.values[i];
        worst_cons = std::max(worst_cons, std::abs(lhs - rhs));
    }
    CHECK(worst_qx < 1e-5);  // limited by the trapezoid antiderivative inside q
    CHECK(worst_cons < 1e-8);

    // q_x at the peak-slope label: u0x ~ 1 gives (1 + t/2)^2 = 2.25 at t = 1
    int i0 = 0;
    for (int i = 0; i < kGrid.n_points; ++i)
        if (st.u0x.values[i] > st.u0x.values[i0]) i0 = i;
    CHECK(snap.qx.values[i0] == doctest::Approx(2.25).epsilon(1e-4));

    // Riccati consistency guard across labels
    for (int i = 0; i < kGrid.n_points; i += 37) {
        const double direct = riccati_ux(st, kGrid.point(i), 1.0);
        CHECK(snap.ux_along.values[i] == doctest::Approx(direct).epsilon(1e-14));
    }
}

TEST_CASE("H^1 energy is conserved along the flow to quadrature accuracy") {
    auto st = init_state(datum::gauss_antiderivative(kGrid));
    const double base = h1_energy(snapshot(st, 0.0));
    CHECK(base == doctest::Approx(kSqrtPiHalf).epsilon(1e-8));
    for (double t : {0.5, 1.0, 5.0, 20.0})
        CHECK(h1_energy(snapshot(st, t)) == doctest::Approx(base).epsilon(1e-10));

    auto blow = init_state(datum::neg_x_gaussian(kGrid));
    const double t_star = blowup_time(blow);
    const double base_b = h1_energy(snapshot(blow, 0.0));
    CHECK(h1_energy(snapshot(blow, 0.9 * t_star)) == doctest::Approx(base_b).epsilon(1e-8));
}

TEST_CASE("validity flag and monotone flow near blow-up") {
    auto blow = init_state(datum::neg_x_gaussian(kGrid));
    const double t_star = blowup_time(blow);
    CHECK(snapshot(blow, 0.5 * t_star).valid);

    auto near = snapshot(blow, t_star * (1.0 - 2e-6));
    CHECK(near.valid);
    for (double v : near.qx.values) CHECK(v > 0.0);

    auto past = snapshot(blow, 1.2 * t_star);
    CHECK_FALSE(past.valid);
    CHECK_THROWS_AS(to_eulerian(past, kGrid), std::domain_error);
}

TEST_CASE("global-existence monitor: sup slope never grows for the good datum") {
    auto st = init_state(datum::gauss_antiderivative(kGrid));
    const double bound = st.u0x.max_abs();
    double running_max = 0.0, prev = bound;
    for (int k = 0; k <= 20; ++k) {
        const double t = 10.0 * k / 20.0;
        const double sup = snapshot(st, t).ux_along.max_abs();
        CHECK(sup <= bound * (1.0 + 1e-12));
        CHECK(sup <= prev * (1.0 + 1e-12));
        prev = sup;
        running_max = std::max(running_max, sup);
    }
    CHECK(running_max <= bound * (1.0 + 1e-12));
}

TEST_CASE("snapshot agrees with the brute-force characteristic oracle") {
    const Grid grid = Grid::make(12.0, 4096);
    auto u0 = datum::gauss_antiderivative(grid);
    auto st = init_state(u0);
    auto run = oracle::integrate_characteristics(u0, 0.0, {0.5, 1.0}, 1e-3);
    REQUIRE(run.times.size() == 2);
    for (std::size_t k = 0; k < run.times.size(); ++k) {
        auto snap = snapshot(st, run.times[k]);
        double worst_q = 0.0, worst_u = 0.0;
        for (int i = 0; i < grid.n_points; ++i) {
            worst_q = std::max(worst_q, std::abs(snap.q.values[i] - run.q[k][i]));
            worst_u = std::max(worst_u, std::abs(snap.u_along.values[i] - run.u[k][i]));
        }
        CHECK(worst_q < 1e-6);
        CHECK(worst_u < 1e-6);
    }
}

TEST_CASE("constant forcing shifts u and q but not the slopes") {
    auto u0 = datum::gauss_antiderivative(kGrid);
    auto st0 = init_state(u0, GMode::zero());
    auto stc = init_state(u0, GMode::constant(0.7));
    CHECK(blowup_time(stc) == blowup_time(st0));
    auto s0 = snapshot(st0, 2.0);
    auto sc = snapshot(stc, 2.0);
    for (int i = 0; i < kGrid.n_points; i += 101) {
        CHECK(sc.u_along.values[i] ==
              doctest::Approx(s0.u_along.values[i] + 0.7 * 2.0).epsilon(1e-12));
        CHECK(sc.q.values[i] ==
              doctest::Approx(s0.q.values[i] + 0.5 * 0.7 * 4.0).epsilon(1e-12));
        CHECK(sc.ux_along.values[i] == s0.ux_along.values[i]);
        CHECK(sc.qx.values[i] == s0.qx.values[i]);
    }

    // closure mode reduces to the constant mode with c = 2 C F(+L)
    auto stl = init_state(u0, GMode::closure(0.25));
    CHECK(stl.forcing_constant ==
          doctest::Approx(2.0 * 0.25 * st0.cumulative_energy.values.back()).epsilon(1e-14));
}

TEST_CASE("to_eulerian: zero fields, internal consistency, H^1 match") {
    auto zero_state = init_state(LineFunction::zero(kGrid));
    auto zfields = to_eulerian(snapshot(zero_state, 1.0), kGrid);
    CHECK(zfields.u.max_abs() == 0.0);
    CHECK(zfields.ux.max_abs() == 0.0);

    auto st = init_state(datum::gauss_antiderivative(kGrid));
    auto fields = to_eulerian(snapshot(st, 1.0), kGrid);
    CHECK(fields.consistency_sup <= 1e-3);

    const double h1 = lp_norm(fields.ux, 2.0);
    const double h1_0 = lp_norm(st.u0x, 2.0);
    CHECK(std::abs(h1 - h1_0) / h1_0 < 1e-6);
}
