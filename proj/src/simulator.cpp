#include "lab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace lab {

void SimConfig::validate() const {
    if (!(initial_eps > 0.0 && initial_eps <= constants.s0))
        throw std::domain_error("SimConfig: initial_eps must lie in (0, s0]");
    if (!(dt_max > 0.0)) throw std::domain_error("SimConfig: dt_max > 0");
    if (!(cfl > 0.0 && cfl < 1.0)) throw std::domain_error("SimConfig: cfl in (0,1)");
    if (!(node_spacing_min > 0.0 && node_spacing_min < node_spacing_max))
        throw std::domain_error("SimConfig: need 0 < spacing_min < spacing_max");
    if (!(t_end >= 0.0)) throw std::domain_error("SimConfig: t_end >= 0");
    if (!(proxy_window > 0.0)) throw std::domain_error("SimConfig: proxy_window > 0");
    if (initial_nodes < 8) throw std::domain_error("SimConfig: initial_nodes >= 8");
    if (node_budget < initial_nodes) throw std::domain_error("SimConfig: node_budget too small");
    if (inf_samples < 2) throw std::domain_error("SimConfig: inf_samples >= 2");
    if (!(refine_max_angle_deg > 1.0)) throw std::domain_error("SimConfig: refine angle > 1 deg");
    if (!(area_jump_tol > 0.0)) throw std::domain_error("SimConfig: area_jump_tol > 0");
}

namespace {

const QuadratureSpec kBarrierQuad{1e-8, 1e-12, 30, 0.0};

std::vector<std::uint8_t> axis_flags(const std::vector<Point>& nodes) {
    std::vector<std::uint8_t> flags(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) flags[i] = nodes[i].x2 == 0.0 ? 1 : 0;
    return flags;
}

DiagnosticsSample make_sample(const SimState& state, const BarrierState& barrier,
                              const SimConfig& config) {
    DiagnosticsSample s;
    s.t = state.t;
    s.d = 1.0 / gradient_proxy(state, config.proxy_window);
    s.proxy = 1.0 / s.d;
    s.area = state.area();
    s.node_count = (int)state.nodes().size();
    s.log_alpha = barrier.log_alpha;
    s.log_eps = barrier.log_eps;
    s.containment_ok = check_containment(state, barrier);
    const double lp = std::log(s.proxy);
    s.rate_estimate = (lp > 0.0 && state.t > 0.0) ? std::log(lp) / state.t : 0.0;
    return s;
}

}  // namespace

namespace {

// The graph x2 = g(x1) is concave, so chords of an inscribed polygon dip
// strictly inside Omega_eps. The simulated patch must contain Omega_eps
// (the transport hypothesis is chi_Omega <= omega), so graph nodes are
// lifted by a bound on the local chord sag, circumscribing the region.
void circumscribe_graph(std::vector<Point>& poly, double eps) {
    const size_t n = poly.size();
    std::vector<char> on_graph(n, 0);
    for (size_t i = 0; i < n; ++i) {
        const Point& p = poly[i];
        if (p.x2 <= 0.0) continue;
        if (p.x1 == kEinv && p.x2 == 1.0) on_graph[i] = 1;                      // top corner
        else if (p.x1 == eps && p.x2 == eval_g(eps)) on_graph[i] = 1;           // inner corner
        else if (p.x1 > eps && p.x1 < kEinv && p.x2 == eval_g(p.x1)) on_graph[i] = 1;
    }
    std::vector<double> lift(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        const size_t j = (i + 1) % n;
        if (!on_graph[i] || !on_graph[j]) continue;
        const Point& a = poly[i];
        const Point& b = poly[j];
        double sag = 0.0;
        for (int k = 1; k <= 9; ++k) {
            const double t = k / 10.0;
            const double x1 = a.x1 + t * (b.x1 - a.x1);
            if (!(x1 > 0.0 && x1 <= kEinv)) continue;
            const double chord = a.x2 + t * (b.x2 - a.x2);
            sag = std::max(sag, eval_g(std::min(x1, kEinv)) - chord);
        }
        lift[i] = std::max(lift[i], 2.5 * sag);
        lift[j] = std::max(lift[j], 2.5 * sag);
    }
    for (size_t i = 0; i < n; ++i) poly[i].x2 += lift[i];
}

}  // namespace

SimState init_state(const SimConfig& config) {
    config.validate();
    SimState state;
    Patch patch;
    patch.contour = sample_omega_boundary(config.initial_eps, config.initial_nodes);
    circumscribe_graph(patch.contour, config.initial_eps);
    patch.strength = 1.0;
    patch.odd_x1 = true;
    patch.odd_x2 = true;
    state.field = VorticityField::make({patch});
    state.on_axis = axis_flags(state.nodes());
    state.initial_area = state.area();
    return state;
}

BarrierState init_barrier(const SimConfig& config) {
    BarrierState b;
    b.t = 0.0;
    b.log_alpha = 0.0;
    b.log_eps = std::log(config.initial_eps);
    return b;
}

namespace {

// ----- barrier ODEs -------------------------------------------------------

// (6.6)-style right-hand side for ln(alpha): the linear decay plus the
// sampled right-wall inflow term.
double alpha_log_rate(const SimState& state, const BarrierState& barrier,
                      const SimConfig& config) {
    const ProfileConstants& pc = config.constants;
    const double decay = 3.0 * (pc.Cprime * pc.s0 / pc.rho0 + pc.C);
    const double alpha = barrier.alpha();
    double inf_term;
    if (alpha > 1e-6) {
        // inf over the segment {(e^-1 alpha, s) : s in [0, alpha]},
        // Chebyshev-spaced samples, min taken
        std::vector<Point> pts(config.inf_samples);
        const int m = config.inf_samples;
        for (int k = 0; k < m; ++k) {
            const double c = 0.5 * (1.0 - std::cos(M_PI * k / (m - 1)));
            pts[k] = {kEinv * alpha, alpha * c};
        }
        const std::vector<Point> u = velocity_batch(state.field, pts);
        double inf_u1 = u[0].x1;
        for (const Point& v : u) inf_u1 = std::min(inf_u1, v.x1);
        inf_term = M_E * inf_u1 / alpha;
    } else {
        // The contour integral evaluates u1 at |x| ~ alpha with absolute
        // rounding noise ~1e-16, useless relative to alpha below ~1e-6.
        // There u1/x1 tends to minus the saturated main term, which is
        // computable at any radius (sections never reach below the patch).
        const double log_r = std::log(kEinv) + barrier.log_alpha;
        const double r = std::exp(std::max(log_r, -640.0));
        const double M0 = main_term_radius(state.field, r, kBarrierQuad).value;
        inf_term = -M_E * M0 * kEinv;
    }
    return -decay + inf_term;
}

// (6.9) bracket: positive means a decreasing eps is admissible
double eps_bracket(double eps, const ProfileConstants& pc) {
    const double L = -std::log(eps);
    const HResult h = compute_h(eps, kBarrierQuad);
    return h.h * L - pc.C * std::sqrt(L) - 8.0 * pc.C - 3.0 * pc.Cprime * pc.s0 / pc.rho0;
}

void advance_barrier(const SimState& state, BarrierState& barrier, const SimConfig& config,
                     double dt) {
    const double a_rate = alpha_log_rate(state, barrier, config);
    // equality version of the eps comparison, capped at the s0 domain edge
    const double B = eps_bracket(barrier.eps(), config.constants);
    const double log_s0 = std::log(config.constants.s0);
    double new_log_eps = barrier.log_eps - B * dt;
    if (new_log_eps > log_s0) {
        new_log_eps = std::min(std::max(barrier.log_eps, log_s0), log_s0);
        barrier.eps_frozen = true;
        barrier.margin = B;  // frozen eps violates the strict comparison by -B
    } else {
        barrier.eps_frozen = false;
        barrier.margin = 0.0;  // equality: fastest admissible barrier
    }
    barrier.log_eps = new_log_eps;
    barrier.log_alpha += a_rate * dt;
    barrier.t += dt;
}

// ----- step ----------------------------------------------------------------

VorticityField field_with(const SimState& state, std::vector<Point> nodes) {
    VorticityField f;  // bypasses validation: transient stage geometry
    f.patches = state.field.patches;
    f.patches[0].contour = std::move(nodes);
    f.total_l1 = state.field.total_l1;
    return f;
}

double local_spacing(const std::vector<Point>& n, size_t i) {
    const size_t m = n.size();
    const double a = (n[i] - n[(i + m - 1) % m]).norm();
    const double b = (n[(i + 1) % m] - n[i]).norm();
    return std::min(a, b);
}

}  // namespace

StepInfo step(SimState& state, BarrierState& barrier, const SimConfig& config) {
    StepInfo info;
    const std::vector<Point>& x0 = state.nodes();
    const size_t n = x0.size();

    const std::vector<Point> k1 = velocity_batch(state.field, x0);
    // CFL on the relative velocity of adjacent nodes: near the origin the
    // motion is coherent (u scales with |x|), so the absolute speed is not
    // the stability driver; neighbor shear is.
    double max_speed = 0.0, max_strain = 0.0;
    for (size_t i = 0; i < n; ++i) {
        max_speed = std::max(max_speed, k1[i].norm());
        const size_t j = (i + 1) % n;
        const double len = (x0[j] - x0[i]).norm();
        if (len > 0.0) max_strain = std::max(max_strain, (k1[j] - k1[i]).norm() / len);
    }
    info.max_speed = max_speed;
    double dt = config.dt_max;
    if (max_strain > 0.0) dt = std::min(dt, config.cfl / max_strain);
    if (max_speed > 0.0) dt = std::min(dt, 2.0 * config.node_spacing_max / max_speed);

    const double area0 = state.area();
    auto displace = [&](const std::vector<Point>& base, const std::vector<Point>& k,
                        double h) {
        std::vector<Point> out(n);
        for (size_t i = 0; i < n; ++i) {
            out[i] = base[i] + k[i] * h;
            if (state.on_axis[i]) out[i].x2 = 0.0;  // axis nodes move horizontally
        }
        return out;
    };

    for (int attempt = 0; attempt <= 8; ++attempt) {
        const std::vector<Point> k2 =
            velocity_batch(field_with(state, displace(x0, k1, 0.5 * dt)), displace(x0, k1, 0.5 * dt));
        const std::vector<Point> k3 =
            velocity_batch(field_with(state, displace(x0, k2, 0.5 * dt)), displace(x0, k2, 0.5 * dt));
        const std::vector<Point> k4 =
            velocity_batch(field_with(state, displace(x0, k3, dt)), displace(x0, k3, dt));

        std::vector<Point> x1(n);
        bool finite = true;
        for (size_t i = 0; i < n; ++i) {
            const Point k = (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (1.0 / 6.0);
            x1[i] = x0[i] + k * dt;
            if (state.on_axis[i]) x1[i].x2 = 0.0;
            finite = finite && point_finite(x1[i]);
        }

        bool ok = finite;
        if (ok && max_speed * dt > 8.0 * config.node_spacing_max) ok = false;  // speed overflow
        double area1 = 0.0;
        if (ok) {
            area1 = signed_area(x1);
            ok = std::abs(area1 - area0) <= config.area_jump_tol * std::abs(area0);
        }
        if (ok) ok = polygon_is_simple(x1);

        if (ok) {
            state.field.patches[0].contour = std::move(x1);
            state.t += dt;
            state.accepted_steps += 1;
            advance_barrier(state, barrier, config, dt);
            state.diagnostics.samples.push_back(make_sample(state, barrier, config));
            info.dt = dt;
            info.accepted = true;
            return info;
        }
        ++state.rejected_steps;
        ++info.rejections;
        dt *= 0.5;
    }
    throw std::runtime_error("step: rejected 8 times; contour dynamics unresolved at dt floor");
}

namespace {

// circular-arc midpoint of segment (a,b) from the averaged tangent turn of
// the two neighbors; a positive (left) turn bulges the arc to the right of
// travel. Falls back to the chord midpoint at corners, where the arc model
// does not apply.
Point arc_midpoint(const Point& pm, const Point& a, const Point& b, const Point& pp,
                   double& area_delta) {
    const Point chord_mid = (a + b) * 0.5;
    const Point e = b - a;
    const double L = e.norm();
    area_delta = 0.0;
    if (L == 0.0) return chord_mid;
    auto turn = [](const Point& u, const Point& v) { return std::atan2(cross(u, v), dot(u, v)); };
    const double t1 = turn(a - pm, e), t2 = turn(e, pp - b);
    if (std::abs(t1) > 0.8 || std::abs(t2) > 0.8) return chord_mid;  // corner
    const double phi = 0.5 * (t1 + t2);
    double sagitta = 0.5 * L * std::tan(0.25 * phi);
    sagitta = std::clamp(sagitta, -0.2 * L, 0.2 * L);
    const Point right{e.x2 / L, -e.x1 / L};
    area_delta = 0.5 * L * sagitta;  // signed triangle a-mid-b
    return chord_mid + right * sagitta;
}

}  // namespace

RefineReport refine(SimState& state, const SimConfig& config) {
    RefineReport rep;
    const double max_angle = config.refine_max_angle_deg * M_PI / 180.0;
    const double area_before = state.area();
    const double area_budget = 1e-6 * std::abs(area_before);
    double area_used = 0.0;

    for (int pass = 0; pass < 8; ++pass) {
        std::vector<Point>& nodes = state.nodes();
        const size_t n = nodes.size();
        std::vector<Point> out;
        std::vector<std::uint8_t> out_axis;
        out.reserve(n * 2);
        out_axis.reserve(n * 2);
        int inserted = 0;

        for (size_t i = 0; i < n; ++i) {
            const Point& a = nodes[i];
            const Point& b = nodes[(i + 1) % n];
            const Point& pm = nodes[(i + n - 1) % n];
            const Point& pp = nodes[(i + 2) % n];
            out.push_back(a);
            out_axis.push_back(state.on_axis[i]);
            const double len = (b - a).norm();
            auto turn = [](const Point& u, const Point& v) {
                return std::abs(std::atan2(cross(u, v), dot(u, v)));
            };
            const bool long_seg = len > config.node_spacing_max;
            const bool sharp = (turn(a - pm, b - a) > max_angle || turn(b - a, pp - b) > max_angle) &&
                               len > 2.0 * config.node_spacing_min;
            if (!long_seg && !sharp) continue;
            if ((long)(out.size() + (n - i)) >= config.node_budget) {
                rep.budget_exceeded = true;
                continue;
            }
            const bool axis_seg = state.on_axis[i] && state.on_axis[(i + 1) % n];
            double delta = 0.0;
            Point mid = axis_seg ? (a + b) * 0.5 : arc_midpoint(pm, a, b, pp, delta);
            if (area_used + std::abs(delta) > area_budget) {
                mid = (a + b) * 0.5;  // chord insertion is area-exact
                if (axis_seg) mid.x2 = 0.0;
                delta = 0.0;
            }
            if (axis_seg) mid.x2 = 0.0;
            area_used += std::abs(delta);
            out.push_back(mid);
            out_axis.push_back(axis_seg ? 1 : 0);
            ++inserted;
        }
        nodes = std::move(out);
        state.on_axis = std::move(out_axis);
        rep.inserted += inserted;
        if (inserted == 0) break;
    }

    // merge over-resolved straight runs (never structural corner nodes)
    {
        std::vector<Point>& nodes = state.nodes();
        const size_t n = nodes.size();
        std::vector<Point> out;
        std::vector<std::uint8_t> out_axis;
        out.reserve(n);
        out_axis.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            const Point& a = nodes[(i + n - 1) % n];
            const Point& p = nodes[i];
            const Point& b = nodes[(i + 1) % n];
            const bool corner = state.on_axis[i] &&
                                (!state.on_axis[(i + n - 1) % n] || !state.on_axis[(i + 1) % n]);
            const double la = (p - a).norm();
            const double lb = (b - p).norm();
            const double tri = 0.5 * std::abs(cross(p - a, b - a));
            const double turn = std::abs(std::atan2(cross(p - a, b - p), dot(p - a, b - p)));
            const bool mergeable = !corner && la < config.node_spacing_min &&
                                   lb < config.node_spacing_min &&
                                   turn < 2.0 * M_PI / 180.0 &&
                                   la + lb < config.node_spacing_max &&
                                   area_used + tri <= area_budget;
            if (mergeable && out.size() + (n - i) > 16) {
                area_used += tri;
                ++rep.merged;
                continue;
            }
            out.push_back(p);
            out_axis.push_back(state.on_axis[i]);
        }
        nodes = std::move(out);
        state.on_axis = std::move(out_axis);
    }

    rep.area_change = std::abs(state.area() - area_before) / std::abs(area_before);
    return rep;
}

double gradient_proxy(const SimState& state, double window) {
    if (!(window > 0.0)) throw std::domain_error("gradient_proxy: window > 0");
    const std::vector<Point>& nodes = state.nodes();
    if (nodes.empty()) throw std::runtime_error("gradient_proxy: empty contour");
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (state.on_axis[i]) continue;
        if (nodes[i].norm() < window) d = std::min(d, nodes[i].x1);
    }
    if (!std::isfinite(d)) {
        for (size_t i = 0; i < nodes.size(); ++i)
            if (!state.on_axis[i]) d = std::min(d, nodes[i].x1);
    }
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::runtime_error("gradient_proxy: no free node with positive x1");
    return 1.0 / d;
}

namespace {

bool scaled_region_contains(double eps_b, double log_alpha, const Point& p) {
    const double alpha = std::exp(log_alpha);
    if (alpha == 0.0) return false;  // barrier collapsed below double scale
    const double x1 = p.x1 / alpha;
    if (!(x1 > eps_b && x1 < kEinv)) return false;
    const double x2 = p.x2 / alpha;
    if (!(x2 > 0.0)) return false;
    return x2 < eval_g(x1);
}

}  // namespace

bool check_containment(const SimState& state, const BarrierState& barrier) {
    const double eps_b = barrier.eps();
    const std::vector<Point>& nodes = state.nodes();
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (scaled_region_contains(eps_b, barrier.log_alpha, nodes[i])) return false;
        const Point mid = (nodes[i] + nodes[(i + 1) % nodes.size()]) * 0.5;
        if (scaled_region_contains(eps_b, barrier.log_alpha, mid)) return false;
    }
    return true;
}

RateSeries rate_estimate(const DiagnosticsHistory& history) {
    RateSeries out;
    std::vector<std::pair<double, double>> lnln;  // (t, ln ln proxy)
    for (const DiagnosticsSample& s : history.samples) {
        if (!(s.proxy > 1.0) || !(s.t > 0.0)) continue;
        const double l = std::log(std::log(s.proxy));
        out.pointwise.emplace_back(s.t, l / s.t);
        lnln.emplace_back(s.t, l);
    }
    const size_t m = lnln.size();
    if (m >= 3) {
        const size_t start = std::min(m - 2, m - std::max<size_t>(2, m / 5));
        double st = 0, sl = 0, stt = 0, stl = 0;
        const size_t k = m - start;
        for (size_t i = start; i < m; ++i) {
            st += lnln[i].first;
            sl += lnln[i].second;
            stt += lnln[i].first * lnln[i].first;
            stl += lnln[i].first * lnln[i].second;
        }
        const double denom = k * stt - st * st;
        if (denom > 0.0) {
            out.trailing_slope = (k * stl - st * sl) / denom;
            out.has_slope = true;
        }
    }
    return out;
}

std::string RunResult::status_name() const {
    switch (status) {
        case RunStatus::completed: return "completed";
        case RunStatus::floor_reached: return "floor_reached";
        case RunStatus::node_budget: return "node_budget";
    }
    return "unknown";
}

RunResult run_simulation(const SimConfig& config,
                         const std::function<void(const SimState&, const BarrierState&)>&
                             on_sample) {
    RunResult run;
    run.state = init_state(config);
    run.barrier = init_barrier(config);
    refine(run.state, config);
    run.state.initial_area = run.state.area();
    run.state.diagnostics.samples.push_back(make_sample(run.state, run.barrier, config));
    if (on_sample) on_sample(run.state, run.barrier);

    while (run.state.t < config.t_end) {
        const RefineReport rr = refine(run.state, config);
        if (rr.budget_exceeded) {
            run.status = RunStatus::node_budget;
            return run;
        }
        step(run.state, run.barrier, config);
        if (on_sample) on_sample(run.state, run.barrier);
        const double d = run.state.diagnostics.samples.back().d;
        if (d < 10.0 * config.node_spacing_min) {
            run.status = RunStatus::floor_reached;
            return run;
        }
    }
    run.status = RunStatus::completed;
    return run;
}

void save_checkpoint(std::ostream& os, const SimState& state, const BarrierState& barrier) {
    os.precision(17);
    os << "# lab-checkpoint v1\n";
    os << "t " << state.t << "\n";
    os << "log_alpha " << barrier.log_alpha << "\n";
    os << "log_eps " << barrier.log_eps << "\n";
    os << "eps_frozen " << (barrier.eps_frozen ? 1 : 0) << "\n";
    os << "margin " << barrier.margin << "\n";
    os << "initial_area " << state.initial_area << "\n";
    os << "accepted " << state.accepted_steps << "\n";
    os << "rejected " << state.rejected_steps << "\n";
    os << "strength " << state.field.patches[0].strength << "\n";
    os << "nodes " << state.nodes().size() << "\n";
    for (size_t i = 0; i < state.nodes().size(); ++i)
        os << state.nodes()[i].x1 << " " << state.nodes()[i].x2 << " " << (int)state.on_axis[i]
           << "\n";
}

void load_checkpoint(std::istream& is, SimState& state, BarrierState& barrier) {
    std::string line;
    if (!std::getline(is, line) || line != "# lab-checkpoint v1")
        throw std::runtime_error("load_checkpoint: unrecognized header");
    auto read_kv = [&](const char* key) -> std::string {
        if (!std::getline(is, line)) throw std::runtime_error("load_checkpoint: truncated");
        std::istringstream ls(line);
        std::string k, v;
        ls >> k;
        std::getline(ls, v);
        if (k != key) throw std::runtime_error(std::string("load_checkpoint: expected ") + key);
        return v;
    };
    state = SimState{};
    barrier = BarrierState{};
    state.t = std::stod(read_kv("t"));
    barrier.t = state.t;
    barrier.log_alpha = std::stod(read_kv("log_alpha"));
    barrier.log_eps = std::stod(read_kv("log_eps"));
    barrier.eps_frozen = std::stoi(read_kv("eps_frozen")) != 0;
    barrier.margin = std::stod(read_kv("margin"));
    state.initial_area = std::stod(read_kv("initial_area"));
    state.accepted_steps = std::stol(read_kv("accepted"));
    state.rejected_steps = std::stol(read_kv("rejected"));
    Patch patch;
    patch.strength = std::stod(read_kv("strength"));
    patch.odd_x1 = patch.odd_x2 = true;
    const long n = std::stol(read_kv("nodes"));
    patch.contour.resize(n);
    std::vector<std::uint8_t> flags(n);
    for (long i = 0; i < n; ++i) {
        if (!std::getline(is, line)) throw std::runtime_error("load_checkpoint: missing nodes");
        std::istringstream ls(line);
        int f;
        if (!(ls >> patch.contour[i].x1 >> patch.contour[i].x2 >> f))
            throw std::runtime_error("load_checkpoint: bad node line");
        flags[i] = (std::uint8_t)f;
    }
    state.field = VorticityField::make({patch});
    state.on_axis = std::move(flags);
}

}  // namespace lab
