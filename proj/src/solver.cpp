#include "fspde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fspde/errors.hpp"
#include "fspde/parallel.hpp"
#include "fspde/specfun.hpp"

namespace fspde {
namespace {

bool is_zero(const Field& f) { return f.values.empty(); }

void check_profile(const Field& f, const TorusGrid& grid, const char* what) {
    if (is_zero(f)) return;
    if (f.grid.d != grid.d || f.grid.n != grid.n || f.grid.length != grid.length ||
        f.values.size() != grid.size()) {
        std::ostringstream os;
        os << what << " does not live on the solution grid";
        throw SizeError(os.str());
    }
}

const TorusGrid* find_grid(const ProblemData& data) {
    if (!is_zero(data.u0)) return &data.u0.grid;
    if (!is_zero(data.v0)) return &data.v0.grid;
    for (const auto& f : data.g)
        if (!is_zero(f)) return &f.grid;
    for (const auto& f : data.h)
        if (!is_zero(f)) return &f.grid;
    return nullptr;
}

struct Event {
    std::size_t node;
    int copy;
    const double* sizes;
};

// One evaluation of the mild-solution map R on a union time grid.
class Engine {
public:
    Engine(const ProblemData& data, const ProblemParams& params, const TorusGrid& grid,
           const TimeGrid& time, const NoiseRealization& noise)
        : data_(data), params_(params), grid_(grid), time_(time), noise_(noise) {
        params_.validate();
        grid_.validate();
        time_.validate();
        check_profile(data.u0, grid_, "u0");
        check_profile(data.v0, grid_, "v0");
        for (const auto& g : data.g) check_profile(g, grid_, "g profile");
        for (const auto& h : data.h) check_profile(h, grid_, "h profile");
        build_nodes();
        build_groups();
        tables();
    }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t size() const { return grid_.size(); }
    const std::vector<std::size_t>& out_index() const { return out_index_; }

    // left/right values at all nodes, node-major.
    struct State {
        std::vector<double> left, right;
    };

    State apply(const State* cur, bool use_maps) const;

    std::vector<double> output(const State& s) const {
        const std::size_t m = size();
        std::vector<double> out(out_index_.size() * m);
        for (std::size_t i = 0; i < out_index_.size(); ++i)
            std::copy_n(s.right.begin() + out_index_[i] * m, m, out.begin() + i * m);
        return out;
    }

private:
    void build_nodes();
    void build_groups();
    void tables();

    const ProblemData& data_;
    ProblemParams params_;
    TorusGrid grid_;
    TimeGrid time_;
    const NoiseRealization& noise_;

    std::vector<double> nodes_;
    std::vector<std::size_t> out_index_;
    std::vector<Event> events_;
    std::vector<std::vector<double>> dw_;  // per copy, per union interval
    bool wiener_ = false;
    bool jumps_ = false;

    std::vector<double> lambda_;                  // per radial group
    std::vector<std::vector<std::size_t>> idx_;   // flat indices per group

    const MLTable* e1_ = nullptr;   // E_{a,1}
    const MLTable* e2_ = nullptr;   // E_{a,2}
    const MLTable* ea1_ = nullptr;  // E_{a,a+1}
    const MLTable* ea2_ = nullptr;  // E_{a,a+2}
    const MLTable* eq1_ = nullptr;  // E_{a,1+a-beta1}
    const MLTable* eq2_ = nullptr;  // E_{a,1+a-beta2}
};

void Engine::build_nodes() {
    const int n = time_.n;
    std::vector<double> t = time_.nodes();
    jumps_ = !data_.h.empty() && !noise_.jumps.empty();
    if (jumps_ && data_.h.size() != noise_.jumps.size() * static_cast<std::size_t>(data_.d1))
        throw SizeError("need d1 jump profiles h per noise copy");
    for (const auto& path : noise_.jumps) {
        if (jumps_ && path.d1 != data_.d1) throw SizeError("jump path dimension does not match d1");
        for (double tau : path.times)
            if (tau > 0.0 && tau <= time_.tmax) t.push_back(tau);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    nodes_ = std::move(t);
    out_index_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double ti = time_.node(i);
        out_index_[i] = static_cast<std::size_t>(
            std::lower_bound(nodes_.begin(), nodes_.end(), ti) - nodes_.begin());
    }
    if (jumps_) {
        for (std::size_t k = 0; k < noise_.jumps.size(); ++k) {
            const auto& path = noise_.jumps[k];
            for (std::size_t i = 0; i < path.count(); ++i) {
                const double tau = path.times[i];
                if (!(tau > 0.0 && tau <= time_.tmax)) continue;
                const std::size_t node = static_cast<std::size_t>(
                    std::lower_bound(nodes_.begin(), nodes_.end(), tau) - nodes_.begin());
                events_.push_back({node, static_cast<int>(k), &path.sizes[i * path.d1]});
            }
        }
        std::stable_sort(events_.begin(), events_.end(),
                         [](const Event& a, const Event& b) { return a.node < b.node; });
    }
    wiener_ = !data_.g.empty() && noise_.wiener.has_value();
    if (wiener_) {
        const WienerPath& w = *noise_.wiener;
        if (static_cast<int>(data_.g.size()) != w.copies)
            throw SizeError("need one g profile per Wiener copy");
        if (w.grid.n != time_.n || w.grid.tmax != time_.tmax)
            throw SizeError("Wiener path grid does not match the time grid");
        const std::size_t intervals = nodes_.size() - 1;
        dw_.assign(w.copies, std::vector<double>(intervals, 0.0));
        for (int step = 0; step < n; ++step) {
            const std::size_t a = out_index_[step], b = out_index_[step + 1];
            if (b == a + 1) {
                for (int k = 0; k < w.copies; ++k) dw_[k][a] = w.increment(k, step);
                continue;
            }
            // Jump times split this step: fill in with the Brownian bridge.
            std::vector<double> fr;
            for (std::size_t q = a + 1; q < b; ++q)
                fr.push_back((nodes_[q] - time_.node(step)) / time_.dt());
            for (int k = 0; k < w.copies; ++k) {
                const auto path = wiener_bridge(w, k, step, fr);
                double prev = 0.0;
                for (std::size_t q = 0; q < path.size(); ++q) {
                    dw_[k][a + q] = path[q] - prev;
                    prev = path[q];
                }
                dw_[k][b - 1] = w.increment(k, step) - prev;
            }
        }
    }
}

void Engine::build_groups() {
    const std::size_t total = grid_.size();
    std::map<long, std::size_t> slot;
    for (std::size_t i = 0; i < total; ++i) {
        const long s = grid_.wave_sq(i);
        auto it = slot.find(s);
        if (it == slot.end()) {
            it = slot.emplace(s, idx_.size()).first;
            idx_.emplace_back();
            lambda_.push_back(grid_.xi_sq(i));
        }
        idx_[it->second].push_back(i);
    }
}

void Engine::tables() {
    const double a = params_.alpha;
    e1_ = &shared_ml_table(a, 1.0);
    if (a > 1.0) e2_ = &shared_ml_table(a, 2.0);
    ea1_ = &shared_ml_table(a, a + 1.0);
    ea2_ = &shared_ml_table(a, a + 2.0);
    if (wiener_) eq1_ = &shared_ml_table(a, 1.0 + a - params_.beta1);
    if (jumps_) eq2_ = &shared_ml_table(a, 1.0 + a - params_.beta2);
}

Engine::State Engine::apply(const State* cur, bool use_maps) const {
    const std::size_t m = size();
    const std::size_t nn = nodes_.size();
    const double a = params_.alpha;
    const bool maps = use_maps && cur != nullptr;

    // Spectra of the data that do not depend on time.
    const bool has_u0 = !is_zero(data_.u0);
    const bool has_v0 = a > 1.0 && !is_zero(data_.v0);
    std::vector<cplx> u0h, v0h;
    if (has_u0) u0h = forward_fft(grid_, data_.u0.values);
    if (has_v0) v0h = forward_fft(grid_, data_.v0.values);

    // Forcing at every node (left values feed f(u)).
    const bool forcing = static_cast<bool>(data_.f) || (maps && data_.f_u);
    std::vector<cplx> fh;
    if (forcing) {
        fh.assign(nn * m, cplx());
        parallel_for(nn, [&](std::size_t j) {
            std::vector<double> buf(m, 0.0);
            if (data_.f) data_.f(nodes_[j], buf);
            if (maps && data_.f_u) {
                const double* u = &cur->left[j * m];
                for (std::size_t i = 0; i < m; ++i) buf[i] += data_.f_u.map(u[i]);
            }
            std::vector<cplx> c(buf.begin(), buf.end());
            fft_inplace(grid_, c, -1);
            std::copy(c.begin(), c.end(), fh.begin() + j * m);
        });
    }

    // Wiener: combined increment field per union interval, integrand at the left point.
    std::vector<cplx> gh;
    if (wiener_) {
        gh.assign((nn - 1) * m, cplx());
        parallel_for(nn - 1, [&](std::size_t j) {
            std::vector<cplx> c(m, cplx());
            const double tf = data_.g_time ? data_.g_time(nodes_[j]) : 1.0;
            const double* u = maps && data_.g_u ? &cur->right[j * m] : nullptr;
            for (std::size_t k = 0; k < data_.g.size(); ++k) {
                const Field& prof = data_.g[k];
                if (is_zero(prof)) continue;
                const double dw = tf * dw_[k][j];
                for (std::size_t i = 0; i < m; ++i) {
                    const double gu = u ? data_.g_u.map(u[i]) : 1.0;
                    c[i] += gu * prof.values[i] * dw;
                }
            }
            fft_inplace(grid_, c, -1);
            std::copy(c.begin(), c.end(), gh.begin() + j * m);
        });
    }

    // Jumps: one spectrum per event, integrand at the left limit.
    std::vector<cplx> hh;
    if (jumps_) {
        hh.assign(events_.size() * m, cplx());
        parallel_for(events_.size(), [&](std::size_t e) {
            const Event& ev = events_[e];
            std::vector<cplx> c(m, cplx());
            const double tf = data_.h_time ? data_.h_time(nodes_[ev.node]) : 1.0;
            const double* u = maps && data_.h_u ? &cur->left[ev.node * m] : nullptr;
            for (int r = 0; r < data_.d1; ++r) {
                const Field& prof = data_.h[static_cast<std::size_t>(ev.copy) * data_.d1 + r];
                if (is_zero(prof)) continue;
                const double dz = tf * ev.sizes[r];
                for (std::size_t i = 0; i < m; ++i) {
                    const double hu = u ? data_.h_u.map(u[i]) : 1.0;
                    c[i] += hu * prof.values[i] * dz;
                }
            }
            fft_inplace(grid_, c, -1);
            std::copy(c.begin(), c.end(), hh.begin() + e * m);
        });
    }

    std::vector<cplx> left(nn * m, cplx()), right(nn * m, cplx());
    const double dt = time_.dt();
    const double b1 = params_.beta1, b2 = params_.beta2;
    const bool jump_at_zero = b2 <= a;  // kernel finite at lag 0

    parallel_for(lambda_.size(), [&](std::size_t gi) {
        const double lam = lambda_[gi];
        const auto& ids = idx_[gi];
        // Kernel primitives on lags that are whole multiples of dt are cached.
        const int n = time_.n;
        std::vector<double> ca(n + 1), cb(n + 1), cq1, cq2;
        auto fa = [&](double r) { return r > 0.0 ? std::pow(r, a) * (*ea1_)(lam * std::pow(r, a)) : 0.0; };
        auto fb = [&](double r) {
            return r > 0.0 ? std::pow(r, a + 1.0) * (*ea2_)(lam * std::pow(r, a)) : 0.0;
        };
        auto fq1 = [&](double r) { return std::pow(r, a - b1) * (*eq1_)(lam * std::pow(r, a)); };
        auto fq2 = [&](double r) {
            if (r == 0.0) return jump_at_zero ? (b2 == a ? 1.0 : 0.0) : 0.0;
            return std::pow(r, a - b2) * (*eq2_)(lam * std::pow(r, a));
        };
        for (int q = 0; q <= n; ++q) {
            ca[q] = fa(q * dt);
            cb[q] = fb(q * dt);
        }
        if (wiener_) {
            cq1.resize(n + 1);
            for (int q = 1; q <= n; ++q) cq1[q] = fq1(q * dt);
        }
        auto lag_index = [&](double r) -> int {
            const double x = r / dt;
            const double xr = std::round(x);
            return std::abs(x - xr) < 1e-9 ? static_cast<int>(xr) : -1;
        };
        auto A = [&](double r) {
            const int q = lag_index(r);
            return q >= 0 && q <= n ? ca[q] : fa(r);
        };
        auto B = [&](double r) {
            const int q = lag_index(r);
            return q >= 0 && q <= n ? cb[q] : fb(r);
        };
        auto Q1 = [&](double r) {
            const int q = lag_index(r);
            return q >= 1 && q <= n ? cq1[q] : fq1(r);
        };

        std::vector<cplx> acc(ids.size());
        for (std::size_t mi = 0; mi < nn; ++mi) {
            const double t = nodes_[mi];
            std::fill(acc.begin(), acc.end(), cplx());
            const double v = lam * std::pow(t, a);
            if (has_u0) {
                const double e1 = (*e1_)(v);
                for (std::size_t q = 0; q < ids.size(); ++q) acc[q] += e1 * u0h[ids[q]];
            }
            if (has_v0) {
                const double e2 = t * (*e2_)(v);
                for (std::size_t q = 0; q < ids.size(); ++q) acc[q] += e2 * v0h[ids[q]];
            }
            if (forcing) {
                for (std::size_t j = 0; j < mi; ++j) {
                    const double h = nodes_[j + 1] - nodes_[j];
                    const double rb = t - nodes_[j], ra = t - nodes_[j + 1];
                    const double ab = A(rb), aa = A(ra);
                    const double slope = (B(rb) - B(ra) - h * aa) / h;
                    const double w0 = ab - aa - slope, w1 = slope;
                    const cplx* f0 = &fh[j * m];
                    const cplx* f1 = &fh[(j + 1) * m];
                    for (std::size_t q = 0; q < ids.size(); ++q)
                        acc[q] += w0 * f0[ids[q]] + w1 * f1[ids[q]];
                }
            }
            if (wiener_) {
                for (std::size_t j = 0; j < mi; ++j) {
                    const double k = Q1(t - nodes_[j]);
                    const cplx* gj = &gh[j * m];
                    for (std::size_t q = 0; q < ids.size(); ++q) acc[q] += k * gj[ids[q]];
                }
            }
            std::size_t e = 0;
            if (jumps_) {
                for (; e < events_.size() && events_[e].node < mi; ++e) {
                    const double k = fq2(t - nodes_[events_[e].node]);
                    const cplx* he = &hh[e * m];
                    for (std::size_t q = 0; q < ids.size(); ++q) acc[q] += k * he[ids[q]];
                }
            }
            for (std::size_t q = 0; q < ids.size(); ++q) left[mi * m + ids[q]] = acc[q];
            if (jumps_ && jump_at_zero) {
                const double k0 = fq2(0.0);
                for (; e < events_.size() && events_[e].node == mi; ++e) {
                    const cplx* he = &hh[e * m];
                    for (std::size_t q = 0; q < ids.size(); ++q) acc[q] += k0 * he[ids[q]];
                }
            }
            for (std::size_t q = 0; q < ids.size(); ++q) right[mi * m + ids[q]] = acc[q];
        }
    });

    State out;
    out.left.resize(nn * m);
    out.right.resize(nn * m);
    std::vector<bool> jump_node(nn, false);
    for (const auto& ev : events_) jump_node[ev.node] = true;
    const double scale = 1.0 / static_cast<double>(m);
    parallel_for(nn, [&](std::size_t j) {
        std::vector<cplx> c(left.begin() + j * m, left.begin() + (j + 1) * m);
        fft_inplace(grid_, c, +1);
        for (std::size_t i = 0; i < m; ++i) out.left[j * m + i] = c[i].real() * scale;
        if (jump_node[j]) {
            std::copy(right.begin() + j * m, right.begin() + (j + 1) * m, c.begin());
            fft_inplace(grid_, c, +1);
            for (std::size_t i = 0; i < m; ++i) out.right[j * m + i] = c[i].real() * scale;
        } else {
            std::copy_n(out.left.begin() + j * m, m, out.right.begin() + j * m);
        }
    });
    return out;
}

SolutionField make_solution(const Engine& eng, const Engine::State& s, const TorusGrid& grid,
                            const ProblemParams& params, const TimeGrid& time, std::string kind) {
    SolutionField out;
    out.grid = grid;
    out.times = time.nodes();
    out.values = eng.output(s);
    out.params = params;
    out.kind = std::move(kind);
    out.iterations = 1;
    return out;
}

std::vector<std::uint64_t> seeds_of(const NoiseRealization& noise) {
    std::vector<std::uint64_t> s;
    if (noise.wiener) s.push_back(noise.wiener->seed);
    for (const auto& p : noise.jumps)
        if (std::find(s.begin(), s.end(), p.seed) == s.end()) s.push_back(p.seed);
    return s;
}

double increment_norm(const std::vector<double>& a, const std::vector<double>& b, std::size_t m,
                      const TorusGrid& grid, const TimeGrid& time, double p) {
    // Right-endpoint rule over the output nodes t_1..t_n.
    double acc = 0.0;
    for (std::size_t i = m; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(acc * grid.cell_volume() * time.dt(), 1.0 / p);
}

}  // namespace

std::span<const double> SolutionField::slice(std::size_t i) const {
    const std::size_t m = grid.size();
    if (i >= times.size()) throw SizeError("time index out of range");
    return {values.data() + i * m, m};
}

Field SolutionField::at(std::size_t i) const {
    auto s = slice(i);
    return {grid, std::vector<double>(s.begin(), s.end())};
}

double space_time_lp(const SolutionField& u, double p) {
    const std::size_t m = u.grid.size();
    double acc = 0.0;
    for (std::size_t i = m; i < u.values.size(); ++i) acc += std::pow(std::abs(u.values[i]), p);
    const double dt = u.times.size() > 1 ? u.times[1] - u.times[0] : 0.0;
    return std::pow(acc * u.grid.cell_volume() * dt, 1.0 / p);
}

SolutionField deterministic_propagate(const ProblemData& data, const ProblemParams& params,
                                      const TimeGrid& time) {
    const TorusGrid* grid = find_grid(data);
    if (!grid) throw SizeError("deterministic problem needs u0 or v0 to fix the grid");
    ProblemData det;
    det.u0 = data.u0;
    det.v0 = data.v0;
    det.f = data.f;
    NoiseRealization none;
    Engine eng(det, params, *grid, time, none);
    return make_solution(eng, eng.apply(nullptr, false), *grid, params, time, "deterministic");
}

SolutionField stochastic_convolution_jump(const std::vector<Field>& h, int d1, double beta2,
                                          const std::vector<JumpPath>& paths,
                                          const ProblemParams& params, const TimeGrid& time) {
    ProblemParams pp = params;
    pp.beta2 = beta2;
    pp.validate();
    ProblemData data;
    data.h = h;
    data.d1 = d1;
    const TorusGrid* grid = find_grid(data);
    if (!grid) throw SizeError("jump convolution needs at least one nonzero h profile");
    NoiseRealization noise;
    noise.jumps = paths;
    Engine eng(data, pp, *grid, time, noise);
    auto out = make_solution(eng, eng.apply(nullptr, false), *grid, pp, time, "jump-convolution");
    out.seeds = seeds_of(noise);
    return out;
}

SolutionField stochastic_convolution_wiener(const std::vector<Field>& g, double beta1,
                                            const WienerPath& w, const ProblemParams& params,
                                            const TimeGrid& time) {
    ProblemParams pp = params;
    pp.beta1 = beta1;
    pp.validate();
    ProblemData data;
    data.g = g;
    const TorusGrid* grid = find_grid(data);
    if (!grid) throw SizeError("Wiener convolution needs at least one nonzero g profile");
    NoiseRealization noise;
    noise.wiener = w;
    Engine eng(data, pp, *grid, time, noise);
    auto out = make_solution(eng, eng.apply(nullptr, false), *grid, pp, time, "wiener-convolution");
    out.seeds = seeds_of(noise);
    return out;
}

SolutionField solve_linear(const ProblemData& data, const ProblemParams& params, const TimeGrid& time,
                           const NoiseRealization& noise) {
    if (data.has_maps()) throw ParameterError("solve_linear takes data without nonlinear maps");
    const TorusGrid* grid = find_grid(data);
    if (!grid) throw SizeError("problem data carry no field to fix the grid");
    Engine eng(data, params, *grid, time, noise);
    auto out = make_solution(eng, eng.apply(nullptr, false), *grid, params, time, "linear");
    out.seeds = seeds_of(noise);
    return out;
}

SolutionField solve_semilinear(const ProblemData& data, const ProblemParams& params,
                               const TimeGrid& time, const NoiseRealization& noise,
                               const SolveOptions& options) {
    const TorusGrid* grid = find_grid(data);
    if (!grid) throw SizeError("problem data carry no field to fix the grid");
    for (const SemilinearMap* mp : {&data.f_u, &data.g_u, &data.h_u})
        if (*mp && !(mp->lipschitz >= 0.0 && std::isfinite(mp->lipschitz)))
            throw ParameterError("semilinear maps must declare a finite Lipschitz constant");
    Engine eng(data, params, *grid, time, noise);
    const std::size_t m = grid->size();
    Engine::State cur = eng.apply(nullptr, false);
    SolutionField out;
    out.grid = *grid;
    out.times = time.nodes();
    out.params = params;
    out.kind = "semilinear";
    out.seeds = seeds_of(noise);
    out.converged = false;
    std::vector<double> prev_out = eng.output(cur);
    for (int it = 1; it <= options.max_iter; ++it) {
        Engine::State next = eng.apply(&cur, true);
        std::vector<double> next_out = eng.output(next);
        const double inc = increment_norm(next_out, prev_out, m, *grid, time, params.p);
        if (!out.increments.empty())
            out.ratios.push_back(out.increments.back() > 0.0 ? inc / out.increments.back() : 0.0);
        out.increments.push_back(inc);
        out.iterations = it;
        cur = std::move(next);
        prev_out = std::move(next_out);
        if (inc < options.picard_tol) {
            out.converged = true;
            break;
        }
    }
    out.values = std::move(prev_out);
    return out;
}

SolutionField solve_white_noise(const ProblemData& data, const ProblemParams& params,
                                const TorusGrid& grid, int basis_size, const LevySpec& spec,
                                const TimeGrid& time, std::uint64_t seed, const SolveOptions& options) {
    const WhiteNoiseGate gate = require_white_noise_gate(params, grid.d);
    if (spec.d1 != 1) throw ParameterError("white noise uses scalar jumps (d1 = 1)");
    WhiteNoise wn(spec, grid, basis_size, time.tmax, seed);
    ProblemData d = data;
    d.d1 = 1;
    d.h.clear();
    for (int k = 0; k < basis_size; ++k) d.h.push_back(wn.basis()[k]);
    d.g.clear();
    if (is_zero(d.u0)) d.u0 = Field(grid);
    NoiseRealization noise;
    noise.jumps = wn.paths();
    SolutionField out = d.has_maps() ? solve_semilinear(d, params, time, noise, options)
                                     : solve_linear(d, params, time, noise);
    out.kind = "white-noise";
    out.gate = gate;
    out.seeds = {seed};
    return out;
}

}  // namespace fspde
