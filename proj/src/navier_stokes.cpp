#include "fcp/navier_stokes.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "fcp/errors.hpp"

namespace fcp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Spectral workspace for one resolution: FFTW plans plus scratch arrays.
// Plans are created with FFTW_ESTIMATE so the chosen algorithm (and hence
// the floating-point result) is reproducible run to run.
class SpectralWorkspace {
public:
    explicit SpectralWorkspace(std::size_t n) : n_(n), buf_(n * n) {
        auto* p = reinterpret_cast<fftw_complex*>(buf_.data());
        const int ni = static_cast<int>(n);
        fwd_ = fftw_plan_dft_2d(ni, ni, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(ni, ni, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
        wavenumber_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto m = i <= n / 2 ? static_cast<long>(i)
                                      : static_cast<long>(i) - static_cast<long>(n);
            wavenumber_[i] = kTwoPi * static_cast<double>(m);
        }
    }
    ~SpectralWorkspace() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    std::size_t n() const { return n_; }
    double wavenumber(std::size_t i) const { return wavenumber_[i]; }

    // In-place normalized forward transform (divides by n^2).
    void forward(std::vector<std::complex<double>>& a) {
        buf_ = a;
        fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(buf_.data()),
                         reinterpret_cast<fftw_complex*>(buf_.data()));
        const double scale = 1.0 / static_cast<double>(n_ * n_);
        for (std::size_t i = 0; i < buf_.size(); ++i) a[i] = buf_[i] * scale;
    }

    void backward(std::vector<std::complex<double>>& a) {
        buf_ = a;
        fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(buf_.data()),
                         reinterpret_cast<fftw_complex*>(buf_.data()));
        a = buf_;
    }

private:
    std::size_t n_;
    std::vector<std::complex<double>> buf_;
    std::vector<double> wavenumber_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

struct NSIntegrator {
    SpectralWorkspace ws;
    double viscosity;
    bool dealias;
    std::vector<std::complex<double>> forcing_hat;
    // scratch
    std::vector<std::complex<double>> wx, wy, psi, u, v, nl;

    NSIntegrator(std::size_t n, const NSConfig& cfg, const Field& forcing)
        : ws(n), viscosity(cfg.viscosity), dealias(cfg.dealias) {
        const std::size_t d = n * n;
        forcing_hat.resize(d);
        const auto fv = forcing.values();
        for (std::size_t i = 0; i < d; ++i) forcing_hat[i] = fv[i];
        ws.forward(forcing_hat);
        truncate(forcing_hat);
        wx.resize(d);
        wy.resize(d);
        psi.resize(d);
        u.resize(d);
        v.resize(d);
        nl.resize(d);
    }

    void truncate(std::vector<std::complex<double>>& a) const {
        if (!dealias) return;
        const std::size_t n = ws.n();
        const auto cutoff = static_cast<long>(n) / 3;
        for (std::size_t i = 0; i < n; ++i) {
            const auto mi = i <= n / 2 ? static_cast<long>(i)
                                       : static_cast<long>(i) - static_cast<long>(n);
            for (std::size_t j = 0; j < n; ++j) {
                const auto mj = j <= n / 2 ? static_cast<long>(j)
                                           : static_cast<long>(j) - static_cast<long>(n);
                if (std::labs(mi) > cutoff || std::labs(mj) > cutoff) {
                    a[i * n + j] = 0.0;
                }
            }
        }
    }

    // Velocity from vorticity through the stream function (zero-mean gauge).
    void compute_velocity(const std::vector<std::complex<double>>& what) {
        const std::size_t n = ws.n();
        for (std::size_t i = 0; i < n; ++i) {
            const double kx = ws.wavenumber(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double ky = ws.wavenumber(j);
                const double k2 = kx * kx + ky * ky;
                const std::size_t id = i * n + j;
                const std::complex<double> psih = k2 == 0.0 ? 0.0 : -what[id] / k2;
                psi[id] = psih;
                u[id] = std::complex<double>(0.0, -ky) * psih;  // -d psi / dy
                v[id] = std::complex<double>(0.0, kx) * psih;   //  d psi / dx
            }
        }
    }

    // Nonlinear + forcing part of d(omega hat)/dt (diffusion handled by the
    // integrating factor).
    void rhs(const std::vector<std::complex<double>>& what,
             std::vector<std::complex<double>>& out) {
        const std::size_t n = ws.n();
        compute_velocity(what);
        for (std::size_t i = 0; i < n; ++i) {
            const double kx = ws.wavenumber(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double ky = ws.wavenumber(j);
                const std::size_t id = i * n + j;
                wx[id] = std::complex<double>(0.0, kx) * what[id];
                wy[id] = std::complex<double>(0.0, ky) * what[id];
            }
        }
        ws.backward(u);
        ws.backward(v);
        ws.backward(wx);
        ws.backward(wy);
        for (std::size_t id = 0; id < n * n; ++id) {
            nl[id] = -(u[id].real() * wx[id].real() + v[id].real() * wy[id].real());
        }
        ws.forward(nl);
        truncate(nl);
        for (std::size_t id = 0; id < n * n; ++id) out[id] = nl[id] + forcing_hat[id];
    }

    // One Heun step with exact diffusion: E = exp(-nu k^2 dt).
    void step(std::vector<std::complex<double>>& what, double dt,
              std::vector<std::complex<double>>& k1, std::vector<std::complex<double>>& k2,
              std::vector<std::complex<double>>& stage) {
        const std::size_t n = ws.n();
        rhs(what, k1);
        for (std::size_t i = 0; i < n; ++i) {
            const double kx = ws.wavenumber(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double ky = ws.wavenumber(j);
                const std::size_t id = i * n + j;
                const double e = std::exp(-viscosity * (kx * kx + ky * ky) * dt);
                stage[id] = e * (what[id] + dt * k1[id]);
                k1[id] *= e; // reuse as E k1
            }
        }
        rhs(stage, k2);
        for (std::size_t i = 0; i < n; ++i) {
            const double kx = ws.wavenumber(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double ky = ws.wavenumber(j);
                const std::size_t id = i * n + j;
                const double e = std::exp(-viscosity * (kx * kx + ky * ky) * dt);
                what[id] = e * what[id] + 0.5 * dt * (k1[id] + k2[id]);
            }
        }
    }

    double max_speed(const std::vector<std::complex<double>>& what) {
        compute_velocity(what);
        ws.backward(u);
        ws.backward(v);
        double m = 0.0;
        for (std::size_t id = 0; id < ws.n() * ws.n(); ++id) {
            m = std::max(m, std::hypot(u[id].real(), v[id].real()));
        }
        return m;
    }
};

Field default_forcing(const GridPtr& grid, double amplitude) {
    return discretize(grid, [amplitude](double x, double y) {
        return amplitude * std::sin(kTwoPi * (x + y));
    });
}

void validate_ns_grid(const Grid& grid) {
    if (grid.dim() != 2 || grid.cells(0) != grid.cells(1)) {
        throw std::invalid_argument("ns_rollout: grid must be a square 2D grid");
    }
    if (grid.kind() != GridKind::Uniform) {
        throw std::invalid_argument("ns_rollout: grid must be uniform (periodic spectral)");
    }
    if (!is_power_of_two(grid.cells(0))) {
        throw std::invalid_argument("ns_rollout: grid size must be a power of two");
    }
}

} // namespace

GridPtr ns_grid(const NSConfig& cfg) {
    if (!is_power_of_two(cfg.grid_size)) {
        throw std::invalid_argument("ns_grid: grid size must be a power of two");
    }
    return Grid::make(GridKind::Uniform, {cfg.grid_size, cfg.grid_size});
}

std::vector<Field> ns_rollout(const Field& omega0, const NSConfig& cfg) {
    const Grid& grid = omega0.grid();
    validate_ns_grid(grid);
    if (!(cfg.viscosity > 0.0)) {
        throw std::invalid_argument("ns_rollout: viscosity must be positive");
    }
    if (cfg.snapshots < 1) throw std::invalid_argument("ns_rollout: snapshots must be >= 1");
    const std::size_t n = grid.cells(0);
    const std::size_t d = n * n;

    Field forcing = cfg.forcing ? *cfg.forcing
                                : default_forcing(omega0.grid_ptr(), cfg.forcing_amplitude);
    if (!forcing.grid().same_geometry(grid)) {
        throw std::invalid_argument("ns_rollout: forcing grid must match the state grid");
    }

    NSIntegrator integ(n, cfg, forcing);

    std::vector<std::complex<double>> what(d);
    {
        const auto ov = omega0.values();
        for (std::size_t i = 0; i < d; ++i) what[i] = ov[i];
        integ.ws.forward(what);
        integ.truncate(what);
    }

    std::vector<Field> snaps;
    snaps.reserve(cfg.snapshots);
    snaps.push_back(omega0);
    if (cfg.snapshots == 1) return snaps;

    std::vector<std::complex<double>> k1(d), k2(d), stage(d), phys(d);
    const double snap_dt = cfg.horizon / static_cast<double>(cfg.snapshots - 1);
    std::size_t global_step = 0;
    const double h = 1.0 / static_cast<double>(n);

    for (std::size_t s = 1; s < cfg.snapshots; ++s) {
        // substep count from the advective CFL at the interval start
        double dt_target = cfg.dt;
        if (dt_target <= 0.0) {
            const double speed = std::max(integ.max_speed(what), 1e-12);
            dt_target = cfg.cfl * h / speed;
        }
        const auto substeps =
            static_cast<std::size_t>(std::max(1.0, std::ceil(snap_dt / dt_target)));
        const double dt = snap_dt / static_cast<double>(substeps);
        for (std::size_t k = 0; k < substeps; ++k) {
            integ.step(what, dt, k1, k2, stage);
            ++global_step;
            if (!std::isfinite(what[0].real()) || !std::isfinite(what[0].imag())) {
                throw numeric_error("ns_rollout: state blew up at substep " +
                                    std::to_string(global_step));
            }
        }
        phys = what;
        integ.ws.backward(phys);
        std::vector<double> values(d);
        bool finite = true;
        for (std::size_t i = 0; i < d; ++i) {
            values[i] = phys[i].real();
            finite = finite && std::isfinite(values[i]);
        }
        if (!finite) {
            throw numeric_error("ns_rollout: non-finite state at substep " +
                                std::to_string(global_step));
        }
        snaps.emplace_back(omega0.grid_ptr(), std::move(values));
    }
    return snaps;
}

Field ns_advance(const Field& omega, double dt_total, const NSConfig& cfg) {
    NSConfig one = cfg;
    one.horizon = dt_total;
    one.snapshots = 2;
    auto snaps = ns_rollout(omega, one);
    return std::move(snaps.back());
}

} // namespace fcp
