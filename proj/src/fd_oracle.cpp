#include "evo/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evo/errors.hpp"

namespace evo {

namespace {

// Thomas algorithm for a constant-band tridiagonal system
// (b on the diagonal, a below, c above; first/last rows are identity).
void solve_tridiagonal(int n, double a, double b, double c, Vec& rhs, Vec& cp, Vec& out) {
    cp[0] = 0.0;
    out[0] = rhs[0];
    for (int i = 1; i < n; ++i) {
        const double ai = (i == n - 1) ? 0.0 : a;
        const double bi = (i == 0 || i == n - 1) ? 1.0 : b;
        const double ci = (i == n - 1) ? 0.0 : c;
        const double m = bi - ai * cp[i - 1];
        cp[i] = ci / m;
        out[i] = (rhs[i] - ai * out[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i) out[i] -= cp[i] * out[i + 1];
}

void second_difference(const Vec& u, double inv_h2, Vec& out) {
    const int n = static_cast<int>(u.size());
    out[0] = out[n - 1] = 0.0;
    for (int i = 1; i < n - 1; ++i)
        out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2;
}

}  // namespace

TimeSignal fd_oracle(const SpatialGrid& grid, const HeatCoefficients& coeffs,
                     const std::function<Vec(double, const Vec&)>& reaction,
                     double t0, double T0, double T1, double dt) {
    if (!(t0 < T0 && T0 < T1)) throw ValidationError("fd_oracle: need t0 < T0 < T1");
    if (!(dt > 0.0)) throw ValidationError("fd_oracle: dt must be > 0");

    const int n = grid.n();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    const int total_steps = static_cast<int>(std::ceil((T1 - t0) / dt - 1e-9));
    const int burn_steps = static_cast<int>(std::round((T0 - t0) / dt));
    const StateSpace& space = grid.space();

    Vec u(n, 0.0), d2(n), rhs(n), cp(n), unew(n), fn(n), fn1(n);
    std::vector<Vec> frames;
    frames.reserve(total_steps - burn_steps + 1);
    if (burn_steps == 0) frames.push_back(u);

    for (int step = 0; step < total_steps; ++step) {
        const double t = t0 + step * dt;
        const double tn = t + dt;
        const double dn = coeffs.delta_sig.value1(t);
        const double dn1 = coeffs.delta_sig.value1(tn);
        const double an = coeffs.alpha_sig.value1(t);
        const double an1 = coeffs.alpha_sig.value1(tn);

        second_difference(u, inv_h2, d2);
        fn = reaction(t, u);
        Vec expl(n);
        for (int i = 0; i < n; ++i)
            expl[i] = u[i] + 0.5 * dt * (dn * d2[i] + an * u[i] + fn[i]);

        // implicit half: (I - dt/2 (dn1 D2 + an1)) u_new = expl + dt/2 f(tn, u_new),
        // fixed-point corrected (the reaction is Lipschitz-small over dt/2)
        const double off = -0.5 * dt * dn1 * inv_h2;
        const double diag = 1.0 - 0.5 * dt * an1 + dt * dn1 * inv_h2;
        unew = u;
        for (int corr = 0; corr < 3; ++corr) {
            fn1 = reaction(tn, unew);
            for (int i = 0; i < n; ++i) rhs[i] = expl[i] + 0.5 * dt * fn1[i];
            rhs[0] = rhs[n - 1] = 0.0;
            solve_tridiagonal(n, off, diag, off, rhs, cp, unew);
        }

        // tripwire: trapezoidal stepping of this dissipative problem must not
        // outgrow the e^{|alpha| dt} coefficient factor per step (plus the
        // reaction's own contribution)
        const double allowed =
            (space.norm(u) * std::exp(std::fabs(an) * dt) + 2.0 * dt * space.norm(fn) + 1e-9) *
            1.1;
        if (space.norm(unew) > allowed) {
            std::ostringstream os;
            os << "fd_oracle: instability at t=" << tn << " (|u| grew from " << space.norm(u)
               << " to " << space.norm(unew) << ")";
            throw ConvergenceError(os.str(), space.norm(unew));
        }
        u = unew;
        if (step + 1 >= burn_steps) frames.push_back(u);
    }
    return grid_signal(T0, dt, std::move(frames), space);
}

TimeSignal fd_oracle(const SpatialGrid& grid, const HeatCoefficients& coeffs,
                     const Sec4Nonlinearity& nl, double t0, double T0, double T1,
                     double dt) {
    const Sec4Nonlinearity nlc = nl;
    return fd_oracle(
        grid, coeffs,
        [nlc](double t, const Vec& u) {
            Vec out = nlc.g_map(u);
            const double a0 = nlc.a0(t);
            for (double& c : out) c *= a0;
            return out;
        },
        t0, T0, T1, dt);
}

}  // namespace evo
