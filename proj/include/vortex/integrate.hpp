#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "vortex/errors.hpp"

namespace vortex {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    // Pairwise-distance guard, relative to the configuration diameter.  The
    // field builders read it; the integrator itself only propagates the
    // resulting CollisionError.
    double collision_guard = 1e-9;
};

/// Right-hand side y' = f(t, y).
using Field = std::function<void(double t, const std::vector<double>& y,
                                 std::vector<double>& dydt)>;

/// One accepted step with interpolation over [t0, t0+h].  The interpolant is
/// a quintic Hermite: endpoint values and slopes plus field slopes at the
/// quarter points (predicted by the cubic), built lazily on first use.
class DenseStep {
  public:
    DenseStep(std::shared_ptr<const Field> field, double t0, double h,
              std::vector<double> y0, std::vector<double> f0,
              std::vector<double> y1, std::vector<double> f1)
        : field_(std::move(field)), t0_(t0), h_(h), y0_(std::move(y0)),
          f0_(std::move(f0)), y1_(std::move(y1)), f1_(std::move(f1)) {}

    double t_begin() const { return t0_; }
    double t_end() const { return t0_ + h_; }
    const std::vector<double>& y_begin() const { return y0_; }
    const std::vector<double>& y_end() const { return y1_; }

    void eval(double t, std::vector<double>& out) const {
        prepare();
        const double s = (t - t0_) / h_;
        const std::size_t n = y0_.size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Horner in s for a0 + a1 s + ... + a5 s^5.
            double acc = a5_[i];
            acc = a4_[i] + s * acc;
            acc = a3_[i] + s * acc;
            acc = a2_[i] + s * acc;
            acc = h_ * f0_[i] + s * acc;
            out[i] = y0_[i] + s * acc;
        }
    }

    std::vector<double> eval(double t) const {
        std::vector<double> out;
        eval(t, out);
        return out;
    }

    /// Time derivative of the interpolant.
    void eval_derivative(double t, std::vector<double>& out) const {
        prepare();
        const double s = (t - t0_) / h_;
        const std::size_t n = y0_.size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 5.0 * a5_[i];
            acc = 4.0 * a4_[i] + s * acc;
            acc = 3.0 * a3_[i] + s * acc;
            acc = 2.0 * a2_[i] + s * acc;
            acc = h_ * f0_[i] + s * acc;
            out[i] = acc / h_;
        }
    }

  private:
    void prepare() const {
        if (ready_) return;
        const std::size_t n = y0_.size();
        // Cubic Hermite predictor at the quarter points.
        auto cubic = [&](double s, std::vector<double>& out) {
            const double h00 = 1 + s * s * (2 * s - 3);
            const double h10 = s * (1 + s * (s - 2));
            const double h01 = s * s * (3 - 2 * s);
            const double h11 = s * s * (s - 1);
            out.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = h00 * y0_[i] + h10 * h_ * f0_[i] + h01 * y1_[i] +
                         h11 * h_ * f1_[i];
        };
        std::vector<double> yq(n), fq1(n), fq2(n);
        cubic(0.25, yq);
        (*field_)(t0_ + 0.25 * h_, yq, fq1);
        cubic(0.75, yq);
        (*field_)(t0_ + 0.75 * h_, yq, fq2);
        solve(fq1, fq2);

        // Second pass: re-evaluate the quarter-point slopes on the first
        // quintic, which lifts the interpolation error one more order.
        eval_poly(0.25, yq);
        (*field_)(t0_ + 0.25 * h_, yq, fq1);
        eval_poly(0.75, yq);
        (*field_)(t0_ + 0.75 * h_, yq, fq2);
        solve(fq1, fq2);
        ready_ = true;
    }

    void eval_poly(double s, std::vector<double>& out) const {
        const std::size_t n = y0_.size();
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = a5_[i];
            acc = a4_[i] + s * acc;
            acc = a3_[i] + s * acc;
            acc = a2_[i] + s * acc;
            acc = h_ * f0_[i] + s * acc;
            out[i] = y0_[i] + s * acc;
        }
    }

    void solve(const std::vector<double>& fq1, const std::vector<double>& fq2) const {
        const std::size_t n = y0_.size();

        // Conditions on (a2..a5): p(1)=y1, p'(1)=h f1, p'(1/4)=h fq1,
        // p'(3/4)=h fq2, with a0=y0, a1=h f0 already fixed.
        using Mat4 = std::array<std::array<double, 4>, 4>;
        static const Mat4 inv = []() {
            Mat4 m = {{{1, 1, 1, 1},
                       {2, 3, 4, 5},
                       {2 * 0.25, 3 * 0.0625, 4 * 0.015625, 5 * 0.00390625},
                       {2 * 0.75, 3 * 0.5625, 4 * 0.421875, 5 * 0.31640625}}};
            Mat4 id = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
            // Gauss-Jordan, partial pivot.
            for (int c = 0; c < 4; ++c) {
                int piv = c;
                for (int r = c + 1; r < 4; ++r)
                    if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
                std::swap(m[c], m[piv]);
                std::swap(id[c], id[piv]);
                const double d = m[c][c];
                for (int k = 0; k < 4; ++k) {
                    m[c][k] /= d;
                    id[c][k] /= d;
                }
                for (int r = 0; r < 4; ++r) {
                    if (r == c) continue;
                    const double f = m[r][c];
                    for (int k = 0; k < 4; ++k) {
                        m[r][k] -= f * m[c][k];
                        id[r][k] -= f * id[c][k];
                    }
                }
            }
            return id;
        }();

        a2_.assign(n, 0.0);
        a3_.assign(n, 0.0);
        a4_.assign(n, 0.0);
        a5_.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double rhs[4] = {y1_[i] - y0_[i] - h_ * f0_[i],
                                   h_ * (f1_[i] - f0_[i]),
                                   h_ * (fq1[i] - f0_[i]),
                                   h_ * (fq2[i] - f0_[i])};
            a2_[i] = inv[0][0] * rhs[0] + inv[0][1] * rhs[1] + inv[0][2] * rhs[2] + inv[0][3] * rhs[3];
            a3_[i] = inv[1][0] * rhs[0] + inv[1][1] * rhs[1] + inv[1][2] * rhs[2] + inv[1][3] * rhs[3];
            a4_[i] = inv[2][0] * rhs[0] + inv[2][1] * rhs[1] + inv[2][2] * rhs[2] + inv[2][3] * rhs[3];
            a5_[i] = inv[3][0] * rhs[0] + inv[3][1] * rhs[1] + inv[3][2] * rhs[2] + inv[3][3] * rhs[3];
        }
    }

    std::shared_ptr<const Field> field_;
    double t0_, h_;
    std::vector<double> y0_, f0_, y1_, f1_;
    mutable bool ready_ = false;
    mutable std::vector<double> a2_, a3_, a4_, a5_;
};

/// Adaptive embedded Runge-Kutta 8(7) with PI step control.  The 13-stage
/// tableau comes from odeint's Fehlberg 7(8) pair used in local-extrapolation
/// mode: the 8th-order result is propagated, the 7th-order difference drives
/// the controller.
class AdaptiveRk87 {
  public:
    AdaptiveRk87(Field field, std::vector<double> y0, double t0,
                 const IntegratorConfig& cfg)
        : field_(std::make_shared<const Field>(std::move(field))), cfg_(cfg),
          t_(t0), y_(std::move(y0)), f_(y_.size()) {
        eval_field(t_, y_, f_);
    }

    double t() const { return t_; }
    const std::vector<double>& y() const { return y_; }
    const std::shared_ptr<const Field>& field() const { return field_; }
    std::size_t n_field_evals() const { return n_evals_; }

    /// Advance by one accepted step toward t_target (h is clipped so the
    /// step never crosses it).  Returns the accepted dense step.
    DenseStep advance(double t_target) {
        const double dir = (t_target >= t_) ? 1.0 : -1.0;
        if (h_ == 0.0) h_ = initial_step(t_target, dir);

        std::string fail_cause;
        for (;;) {
            double h = std::clamp(std::abs(h_), 0.0, cfg_.max_step);
            h = std::min(h, std::abs(t_target - t_));
            if (!(h > min_step()))
                throw StepUnderflowError(
                    "integrate: step size underflow at t=" + std::to_string(t_) +
                    (fail_cause.empty() ? "" : " (" + fail_cause + ")"));
            const double hs = dir * h;

            std::vector<double> ynew(y_.size()), err(y_.size());
            try {
                rk_.do_step(
                    [this](const std::vector<double>& x, std::vector<double>& dxdt,
                           double tt) {
                        dxdt.resize(x.size());
                        eval_field(tt, x, dxdt);
                    },
                    y_, t_, ynew, hs, err);
            } catch (const CollisionError& e) {
                fail_cause = e.what();
                h_ = hs / 2;
                continue;
            } catch (const NonFiniteFieldError& e) {
                fail_cause = e.what();
                h_ = hs / 2;
                continue;
            }

            double errnorm = error_norm(ynew, err);
            if (!std::isfinite(errnorm)) {
                fail_cause = "non-finite error estimate";
                h_ = hs / 2;
                continue;
            }

            if (errnorm <= 1.0) {
                std::vector<double> fnew(y_.size());
                eval_field(t_ + hs, ynew, fnew);
                DenseStep step(field_, t_, hs, y_, f_, ynew, fnew);
                t_ += hs;
                y_ = std::move(ynew);
                f_ = std::move(fnew);
                double fac = 0.9 * std::pow(errnorm, -0.7 / 8.0) *
                             std::pow(errold_, 0.4 / 8.0);
                fac = std::clamp(fac, 0.2, rejected_ ? 1.0 : 5.0);
                errold_ = std::max(errnorm, 1e-4);
                rejected_ = false;
                h_ = hs * fac;
                ++n_steps_;
                return step;
            }
            rejected_ = true;
            ++n_rejected_;
            const double fac = std::clamp(0.9 * std::pow(errnorm, -1.0 / 8.0), 0.1, 0.9);
            h_ = hs * fac;
        }
    }

    bool reached(double t_target) const {
        return std::abs(t_target - t_) <= 1e-14 * std::max(1.0, std::abs(t_target));
    }

  private:
    void eval_field(double t, const std::vector<double>& y,
                    std::vector<double>& out) const {
        out.resize(y.size());
        (*field_)(t, y, out);
        ++n_evals_;
        for (double v : out)
            if (!std::isfinite(v))
                throw NonFiniteFieldError("integrate: field returned a non-finite value");
    }

    double error_norm(const std::vector<double>& ynew,
                      const std::vector<double>& err) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < err.size(); ++i) {
            const double sc = cfg_.abs_tol +
                              cfg_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
            const double q = err[i] / sc;
            acc += q * q;
        }
        return std::sqrt(acc / static_cast<double>(err.size()));
    }

    double min_step() const {
        return 16.0 * std::numeric_limits<double>::epsilon() *
               std::max(1.0, std::abs(t_));
    }

    double initial_step(double t_target, double dir) const {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < y_.size(); ++i) {
            const double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(y_[i]);
            d0 += (y_[i] / sc) * (y_[i] / sc);
            d1 += (f_[i] / sc) * (f_[i] / sc);
        }
        d0 = std::sqrt(d0);
        d1 = std::sqrt(d1);
        double h = (d1 > 1e-10 && d0 > 1e-10) ? 0.01 * d0 / d1
                                              : 1e-6 * std::abs(t_target - t_);
        if (!(h > 0.0) || !std::isfinite(h)) h = 1e-6;
        h = std::min({h, cfg_.max_step, std::abs(t_target - t_)});
        return dir * h;
    }

    std::shared_ptr<const Field> field_;
    boost::numeric::odeint::runge_kutta_fehlberg78<std::vector<double>> rk_;
    IntegratorConfig cfg_;
    double t_;
    std::vector<double> y_, f_;
    double h_ = 0.0;
    double errold_ = 1e-4;
    bool rejected_ = false;
    std::size_t n_steps_ = 0, n_rejected_ = 0;
    mutable std::size_t n_evals_ = 0;
};

/// Accepted-step record of one integration.
struct Solution {
    std::vector<double> times;                 // t at accepted steps, incl. t0
    std::vector<std::vector<double>> states;   // y at accepted steps
    std::vector<DenseStep> steps;              // dense interpolants
    std::size_t n_field_evals = 0;

    const std::vector<double>& back_state() const { return states.back(); }
};

inline Solution integrate(Field field, std::vector<double> y0, double t0,
                          double t1, const IntegratorConfig& cfg = {}) {
    AdaptiveRk87 stepper(std::move(field), std::move(y0), t0, cfg);
    Solution sol;
    sol.times.push_back(t0);
    sol.states.push_back(stepper.y());
    if (t1 == t0) {
        sol.n_field_evals = stepper.n_field_evals();
        return sol;
    }
    while (!stepper.reached(t1)) {
        DenseStep st = stepper.advance(t1);
        sol.times.push_back(stepper.t());
        sol.states.push_back(stepper.y());
        sol.steps.push_back(std::move(st));
        if (sol.steps.size() > 20'000'000)
            throw Error("integrate: step budget exhausted");
    }
    sol.n_field_evals = stepper.n_field_evals();
    return sol;
}

enum class EventDirection { up, down, any };

/// Scalar event g(t, y).
using EventFn = std::function<double(double t, const std::vector<double>& y)>;

struct EventHit {
    double t;
    std::vector<double> y;
};

/// Look for a sign change of g across one dense step ((t0, t1] convention)
/// and refine it by bisection on the interpolant until |g| < 1e-12 or the
/// bracket is at rounding width.
inline std::optional<EventHit> find_event_in_step(const DenseStep& step,
                                                  const EventFn& event,
                                                  EventDirection dir) {
    const double ga = event(step.t_begin(), step.y_begin());
    const double gb = event(step.t_end(), step.y_end());
    const bool up = ga < 0.0 && gb >= 0.0;
    const bool down = ga > 0.0 && gb <= 0.0;
    const bool hit = (dir == EventDirection::up && up) ||
                     (dir == EventDirection::down && down) ||
                     (dir == EventDirection::any && (up || down));
    if (!hit) return std::nullopt;

    double a = step.t_begin(), b = step.t_end(), gaa = ga;
    std::vector<double> ym;
    double tm = b;
    for (int it = 0; it < 200; ++it) {
        tm = 0.5 * (a + b);
        step.eval(tm, ym);
        const double gm = event(tm, ym);
        if (std::abs(gm) < 1e-12) return EventHit{tm, ym};
        if ((gm < 0.0) == (gaa < 0.0)) {
            a = tm;
            gaa = gm;
        } else {
            b = tm;
        }
        if (b - a <= 8.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, std::abs(tm)))
            break;
    }
    step.eval(0.5 * (a + b), ym);
    return EventHit{0.5 * (a + b), ym};
}

/// First event over a stored solution; throws NoEventError when g never
/// changes sign in the requested direction.
inline EventHit find_event(const Solution& sol, const EventFn& event,
                           EventDirection dir = EventDirection::any) {
    for (const DenseStep& st : sol.steps)
        if (auto hit = find_event_in_step(st, event, dir)) return *hit;
    throw NoEventError("find_event: no sign change in span");
}

} // namespace vortex
