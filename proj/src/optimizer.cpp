#include "cablevolt/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "cablevolt/errors.hpp"

namespace cablevolt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegree = kPi / 180.0;
constexpr double kBetaStep = kBetaGridStepDeg * kDegree;
constexpr double kStepTolerance = 1e-12;
constexpr int kBisections = 80;
constexpr int kMaxRefineIterations = 200000;
constexpr double kTieTolerance = 1e-9;

struct Window {
    double lo;
    double hi;
};

constexpr Window kForwardWindow{0.0, kPi / 2.0};
constexpr Window kFullWindow{-kPi + 1e-15, kPi};

/// Evenly spaced points covering [lo, hi] with spacing at most `step`.
std::vector<double> grid(double lo, double hi, double step) {
    if (hi <= lo) {
        return {lo};
    }
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (i + 1 == n) ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

/// Closed-form coefficients of one scaling plus the highest v2 the limits allow.
struct LimitSample {
    ScalingCoefficients coef;
    double current_per_pu = 0.0;  // highest checked current at v2 = 1 p.u. [A]
    double v2_upper = 0.0;
};

class LimitModel {
public:
    LimitModel(const CableSpec& spec, const Constraints& constraints)
        : eval_(spec), constraints_(constraints) {}

    [[nodiscard]] LimitSample at(double alpha, double beta) const {
        LimitSample s{eval_.at(alpha, beta), 0.0, constraints_.v2_max};
        s.current_per_pu = s.coef.current;
        if (constraints_.needs_profile()) {
            // Profiles are linear in v2, so evaluate once at 1 p.u. and scale.
            const double base = eval_.spec().phase_voltage_base();
            const SegmentProfile prof = segment_profile(eval_.spec(), std::polar(alpha, beta) * base,
                                                        Complex{base, 0.0}, constraints_.n_profile_segments);
            if (constraints_.check_internal_current) {
                s.current_per_pu = std::max(s.current_per_pu, prof.max_current());
            }
            if (constraints_.internal_voltage_max) {
                s.v2_upper = std::min(s.v2_upper, *constraints_.internal_voltage_max / (prof.max_voltage() / base));
            }
        }
        s.v2_upper = std::min(s.v2_upper, constraints_.i_rated / s.current_per_pu);
        return s;
    }

    [[nodiscard]] const ScalingEvaluator& evaluator() const { return eval_; }
    [[nodiscard]] const Constraints& constraints() const { return constraints_; }

private:
    ScalingEvaluator eval_;
    Constraints constraints_;
};

struct Candidate {
    double alpha = 0.0;
    double beta = 0.0;
    double v2 = 0.0;
    double value = 0.0;  // efficiency or delivered power, depending on the search
};

bool preferred(const Candidate& a, const Candidate& b) {
    if (a.value > b.value + kTieTolerance) {
        return true;
    }
    if (a.value < b.value - kTieTolerance) {
        return false;
    }
    if (a.v2 != b.v2) {
        return a.v2 < b.v2;
    }
    return a.alpha < b.alpha;
}

/// 1-D compass refinement of `start` over [lo, hi]; accepts strict improvements only.
template <class Eval>
Candidate refine_1d(const Eval& eval, Candidate start, double coord, double lo, double hi, double step) {
    double x = coord;
    double h = step;
    for (int it = 0; it < kMaxRefineIterations && h > kStepTolerance; ++it) {
        bool moved = false;
        for (const double dir : {1.0, -1.0}) {
            const double y = std::clamp(x + dir * h, lo, hi);
            if (y == x) {
                continue;
            }
            const std::optional<Candidate> c = eval(y);
            if (c && c->value > start.value) {
                start = *c;
                x = y;
                moved = true;
                break;
            }
        }
        if (!moved) {
            h *= 0.5;
        }
    }
    return start;
}

/// Feasible boundary between an infeasible point `out` and a feasible point `in`.
template <class Eval>
double bisect_boundary(const Eval& eval, double out, double in) {
    for (int i = 0; i < kBisections; ++i) {
        const double mid = 0.5 * (out + in);
        if (mid == out || mid == in) {
            break;
        }
        if (eval(mid)) {
            in = mid;
        } else {
            out = mid;
        }
    }
    return in;
}

/// Climbs `score` from x0 inside [lo, hi] until eval accepts the point. The
/// feasible set is where score >= 0, so this finds runs that fall between samples.
template <class Eval, class Score>
std::optional<double> climb_to_feasible(const Eval& eval, const Score& score, double x0, double lo, double hi,
                                        double step) {
    double x = x0;
    double best = score(x);
    double h = step;
    for (int it = 0; it < kMaxRefineIterations && h > kStepTolerance; ++it) {
        if (eval(x)) {
            return x;
        }
        bool moved = false;
        for (const double dir : {1.0, -1.0}) {
            const double y = std::clamp(x + dir * h, lo, hi);
            if (y == x) {
                continue;
            }
            const double sy = score(y);
            if (sy > best) {
                best = sy;
                x = y;
                moved = true;
                break;
            }
        }
        if (!moved) {
            h *= 0.5;
        }
    }
    if (eval(x)) {
        return x;
    }
    return std::nullopt;
}

/// Largest value of `score` over [lo, hi]: sampled, then compass-refined.
template <class Score>
double maximize_score(const Score& score, double lo, double hi, double step) {
    const std::vector<double> xs = grid(lo, hi, step);
    std::size_t k = 0;
    std::vector<double> values(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        values[i] = score(xs[i]);
        if (values[i] > values[k]) {
            k = i;
        }
    }
    double x = xs[k];
    double best = values[k];
    double h = xs.size() > 1 ? (hi - lo) / static_cast<double>(xs.size() - 1) : 0.0;
    for (int it = 0; it < kMaxRefineIterations && h > kStepTolerance; ++it) {
        bool moved = false;
        for (const double dir : {1.0, -1.0}) {
            const double y = std::clamp(x + dir * h, lo, hi);
            const double sy = score(y);
            if (y != x && sy > best) {
                best = sy;
                x = y;
                moved = true;
                break;
            }
        }
        if (!moved) {
            h *= 0.5;
        }
    }
    return best;
}

/// Maximises eval over [lo, hi]: sample, isolate feasible runs, refine in each.
/// When no sample is feasible, `score` is climbed from the best sample instead.
template <class Eval, class Score>
std::optional<Candidate> search_interval(const Eval& eval, const Score& score, double lo, double hi, double step) {
    if (hi - lo < 1e-12) {
        return eval(0.5 * (lo + hi));
    }
    const std::vector<double> xs = grid(lo, hi, step);
    std::vector<std::optional<Candidate>> samples(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        samples[i] = eval(xs[i]);
    }
    const double spacing = (hi - lo) / static_cast<double>(xs.size() - 1);

    auto finish_run = [&](const Candidate& start, double x, double run_lo, double run_hi) {
        Candidate c = refine_1d(eval, start, x, run_lo, run_hi, spacing);
        // Boundary points are feasible by construction and may beat the interior.
        for (const double edge : {run_lo, run_hi}) {
            const auto e = eval(edge);
            if (e && e->value > c.value) {
                c = *e;
            }
        }
        return c;
    };

    std::optional<Candidate> best;
    std::size_t i = 0;
    while (i < xs.size()) {
        if (!samples[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        std::size_t arg = i;
        while (j + 1 < xs.size() && samples[j + 1]) {
            ++j;
            if (samples[j]->value > samples[arg]->value) {
                arg = j;
            }
        }
        const double run_lo = i > 0 ? bisect_boundary(eval, xs[i - 1], xs[i]) : xs[i];
        const double run_hi = j + 1 < xs.size() ? bisect_boundary(eval, xs[j + 1], xs[j]) : xs[j];
        const Candidate c = finish_run(*samples[arg], xs[arg], run_lo, run_hi);
        if (!best || preferred(c, *best)) {
            best = c;
        }
        i = j + 1;
    }
    if (best) {
        return best;
    }

    std::size_t k = 0;
    double top = score(xs[0]);
    for (std::size_t m = 1; m < xs.size(); ++m) {
        const double sm = score(xs[m]);
        if (sm > top) {
            top = sm;
            k = m;
        }
    }
    const double a = k > 0 ? xs[k - 1] : xs[k];
    const double b = k + 1 < xs.size() ? xs[k + 1] : xs[k];
    const auto x = climb_to_feasible(eval, score, xs[k], a, b, spacing);
    if (!x) {
        return std::nullopt;
    }
    const double run_lo = *x > a ? bisect_boundary(eval, a, *x) : *x;
    const double run_hi = *x < b ? bisect_boundary(eval, b, *x) : *x;
    return finish_run(*eval(*x), *x, run_lo, run_hi);
}

/// Outer search over alpha of an inner beta search. `score` is the best
/// feasibility score over beta, used when no grid alpha is feasible.
template <class Inner, class Score>
std::optional<Candidate> search_alpha(const Inner& inner, const Score& score, double alpha_lo, double alpha_hi) {
    const std::vector<double> alphas = grid(alpha_lo, alpha_hi, kAlphaGridStep);
    std::vector<std::optional<Candidate>> rows(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        rows[i] = inner(alphas[i]);
    }
    std::optional<Candidate> best;
    for (const auto& r : rows) {
        if (r && (!best || preferred(*r, *best))) {
            best = r;
        }
    }
    if (!best) {
        std::size_t k = 0;
        double top = score(alphas[0]);
        for (std::size_t m = 1; m < alphas.size(); ++m) {
            const double sm = score(alphas[m]);
            if (sm > top) {
                top = sm;
                k = m;
            }
        }
        const double a = k > 0 ? alphas[k - 1] : alphas[k];
        const double b = k + 1 < alphas.size() ? alphas[k + 1] : alphas[k];
        const auto x = climb_to_feasible(inner, score, alphas[k], a, b, kAlphaGridStep);
        if (!x) {
            return std::nullopt;
        }
        best = inner(*x);
    }
    if (alphas.size() == 1) {
        return best;
    }
    return refine_1d(inner, *best, best->alpha, alpha_lo, alpha_hi, kAlphaGridStep);
}

/// Intersections of [lo, hi] (and its 2*pi shifts) with the window.
std::vector<Window> clip_to_window(double lo, double hi, Window w) {
    std::vector<Window> out;
    for (const double shift : {-2.0 * kPi, 0.0, 2.0 * kPi}) {
        const double a = std::max(lo + shift, w.lo);
        const double b = std::min(hi + shift, w.hi);
        if (a <= b) {
            out.push_back({a, b});
        }
    }
    return out;
}

// ---- efficiency at a prescribed production --------------------------------

class ProductionSearch {
public:
    ProductionSearch(const LimitModel& model, double p_farm) : model_(model), p_(p_farm) {}

    [[nodiscard]] std::optional<Candidate> at(double alpha, double beta) const {
        const Constraints& c = model_.constraints();
        const LimitSample s = model_.at(alpha, beta);
        if (!(s.coef.farm > 0.0)) {
            return std::nullopt;
        }
        double v2 = std::sqrt(p_ / s.coef.farm);
        if (v2 < c.v2_min * (1.0 - 1e-12) || v2 > c.v2_max * (1.0 + 1e-12)) {
            return std::nullopt;
        }
        v2 = std::clamp(v2, c.v2_min, c.v2_max);
        if (v2 > s.v2_upper) {
            return std::nullopt;
        }
        return Candidate{alpha, beta, v2, s.coef.grid / s.coef.farm};
    }

    /// Relative slack of the production against what the limits allow at this
    /// scaling; non-negative exactly where `at` succeeds.
    [[nodiscard]] double score(double alpha, double beta) const {
        const Constraints& c = model_.constraints();
        const LimitSample s = model_.at(alpha, beta);
        const double cap = std::min(c.v2_max, s.v2_upper);
        const double up = s.coef.farm * cap * cap - p_;
        const double low = p_ - s.coef.farm * c.v2_min * c.v2_min;
        return std::min(up, low) / p_;
    }

    /// Best beta for fixed alpha. The power equality confines beta to the set
    /// where k(alpha^2 Re A + alpha |B| cos(beta - arg B)) lies in [p/v2max^2, p/v2min^2].
    [[nodiscard]] std::optional<Candidate> best_beta(double alpha, Window window) const {
        const Constraints& c = model_.constraints();
        const TwoPort& tp = model_.evaluator().two_port();
        const double k = model_.evaluator().power_base();
        const double mag_b = std::abs(tp.b);
        const double re_a = tp.a.real();
        const double s_lo = (p_ / (c.v2_max * c.v2_max) / k - alpha * alpha * re_a) / (alpha * mag_b);
        const double s_hi = (p_ / (c.v2_min * c.v2_min) / k - alpha * alpha * re_a) / (alpha * mag_b);
        if (s_lo > 1.0 || s_hi < -1.0) {
            return std::nullopt;
        }
        const double theta1 = std::acos(std::clamp(s_hi, -1.0, 1.0));
        const double theta2 = std::acos(std::clamp(s_lo, -1.0, 1.0));
        const double phi = std::arg(tp.b);

        auto eval = [&](double beta) { return at(alpha, beta); };
        auto slack = [&](double beta) { return score(alpha, beta); };
        std::optional<Candidate> best;
        for (const Window& branch : {Window{phi + theta1, phi + theta2}, Window{phi - theta2, phi - theta1}}) {
            for (const Window& piece : clip_to_window(branch.lo, branch.hi, window)) {
                const auto cand = search_interval(eval, slack, piece.lo, piece.hi, kBetaStep);
                if (cand && (!best || preferred(*cand, *best))) {
                    best = cand;
                }
            }
        }
        return best;
    }

    [[nodiscard]] std::optional<Candidate> best(Window window) const {
        const Constraints& c = model_.constraints();
        auto inner = [&](double alpha) { return best_beta(alpha, window); };
        auto slack = [&](double alpha) {
            return maximize_score([&](double beta) { return score(alpha, beta); }, window.lo, window.hi, kBetaStep);
        };
        return search_alpha(inner, slack, c.alpha_min, c.alpha_max);
    }

private:
    const LimitModel& model_;
    double p_;
};

// ---- maximum deliverable power --------------------------------------------

class TransferSearch {
public:
    explicit TransferSearch(const LimitModel& model) : model_(model) {}

    [[nodiscard]] std::optional<Candidate> at(double alpha, double beta) const {
        const Constraints& c = model_.constraints();
        const LimitSample s = model_.at(alpha, beta);
        if (s.v2_upper < c.v2_min) {
            return std::nullopt;
        }
        // p_grid = grid * v2^2: push v2 up when delivering, down when absorbing.
        const double v2 = s.coef.grid >= 0.0 ? s.v2_upper : c.v2_min;
        return Candidate{alpha, beta, v2, s.coef.grid * v2 * v2};
    }

    /// Non-negative exactly where `at` succeeds.
    [[nodiscard]] double score(double alpha, double beta) const {
        return model_.at(alpha, beta).v2_upper / model_.constraints().v2_min - 1.0;
    }

    [[nodiscard]] std::optional<Candidate> best(Window window) const {
        const Constraints& c = model_.constraints();
        auto inner = [&](double alpha) {
            auto eval = [&](double beta) { return at(alpha, beta); };
            auto slack = [&](double beta) { return score(alpha, beta); };
            return search_interval(eval, slack, window.lo, window.hi, kBetaStep);
        };
        auto slack = [&](double alpha) {
            return maximize_score([&](double beta) { return score(alpha, beta); }, window.lo, window.hi, kBetaStep);
        };
        return search_alpha(inner, slack, c.alpha_min, c.alpha_max);
    }

private:
    const LimitModel& model_;
};

BindingSet classify(const CableSpec& spec, const Constraints& c, const OperatingPoint& op,
                    const FlowSolution& flow) {
    BindingSet out;
    if (op.v2 >= c.v2_max * (1.0 - kTieTolerance)) {
        out.insert(Binding::V2Max);
    }
    if (op.v2 <= c.v2_min * (1.0 + kTieTolerance)) {
        out.insert(Binding::V2Min);
    }
    if (std::abs(op.scaling.alpha - c.alpha_max) <= kTieTolerance) {
        out.insert(Binding::AlphaMax);
    }
    if (std::abs(op.scaling.alpha - c.alpha_min) <= kTieTolerance) {
        out.insert(Binding::AlphaMin);
    }
    double current = flow.max_terminal_current();
    if (c.needs_profile()) {
        const double base = spec.phase_voltage_base() * op.v2;
        const SegmentProfile prof =
            segment_profile(spec, op.scaling.xi() * base, Complex{base, 0.0}, c.n_profile_segments);
        if (c.check_internal_current) {
            current = std::max(current, prof.max_current());
        }
        if (c.internal_voltage_max &&
            prof.max_voltage() / spec.phase_voltage_base() >= *c.internal_voltage_max * (1.0 - 1e-6)) {
            out.insert(Binding::InternalVoltage);
        }
    }
    if (current >= c.i_rated * (1.0 - 1e-6)) {
        out.insert(Binding::CurrentLimit);
    }
    return out;
}

OptimumPoint make_point(const CableSpec& spec, const LimitModel& model, const Candidate& c) {
    OptimumPoint out;
    out.operating_point = OperatingPoint{c.v2, VoltageScaling{c.alpha, c.beta}};
    out.flow = solve_flow(spec, model.evaluator().two_port(), out.operating_point);
    out.binding = classify(spec, model.constraints(), out.operating_point, out.flow);
    return out;
}

}  // namespace

std::string BindingSet::to_string() const {
    static constexpr std::array<std::pair<Binding, const char*>, 6> kNames{{
        {Binding::V2Max, "V2Max"},
        {Binding::V2Min, "V2Min"},
        {Binding::CurrentLimit, "CurrentLimit"},
        {Binding::AlphaMax, "AlphaMax"},
        {Binding::AlphaMin, "AlphaMin"},
        {Binding::InternalVoltage, "InternalVoltage"},
    }};
    std::string out;
    for (const auto& [flag, name] : kNames) {
        if (contains(flag)) {
            if (!out.empty()) {
                out += '|';
            }
            out += name;
        }
    }
    return out.empty() ? "none" : out;
}

Constraints Constraints::for_cable(const CableSpec& spec) {
    Constraints c;
    c.i_rated = spec.rated_current;
    return c;
}

void Constraints::validate() const {
    if (!(std::isfinite(v2_min) && v2_min > 0.0 && std::isfinite(v2_max) && v2_min <= v2_max)) {
        throw ConfigError("voltage limits must satisfy 0 < v2_min <= v2_max");
    }
    if (!(std::isfinite(alpha_min) && alpha_min > 0.0 && std::isfinite(alpha_max) && alpha_min <= alpha_max)) {
        throw ConfigError("scaling limits must satisfy 0 < alpha_min <= alpha_max");
    }
    if (!(std::isfinite(i_rated) && i_rated > 0.0)) {
        throw ConfigError("rated current must be > 0");
    }
    if (n_profile_segments < 1) {
        throw ConfigError("profile segment count must be >= 1");
    }
    if (internal_voltage_max && !(*internal_voltage_max > 0.0)) {
        throw ConfigError("internal voltage limit must be > 0");
    }
}

Constraints Constraints::with_v2_range(double lo, double hi) const {
    Constraints out = *this;
    out.v2_min = lo;
    out.v2_max = hi;
    return out;
}

ScalingOptimum optimize_scaling_unconstrained(const CableSpec& spec, double alpha_lo, double alpha_hi,
                                              Execution exec) {
    if (!(std::isfinite(alpha_lo) && std::isfinite(alpha_hi) && alpha_lo > 0.0 && alpha_lo <= alpha_hi)) {
        throw ConfigError("alpha range must satisfy 0 < lo <= hi");
    }
    const ScalingEvaluator eval(spec);
    auto eta_at = [&](double alpha, double beta) -> std::optional<Candidate> {
        const auto eta = eval.at(alpha, beta).eta();
        if (!eta) {
            return std::nullopt;
        }
        return Candidate{alpha, beta, 0.0, *eta};
    };

    // Coarse grid: one OpenMP task per alpha row, beta strictly inside (0, 90 deg).
    const std::vector<double> alphas = grid(alpha_lo, alpha_hi, kAlphaGridStep);
    const auto n_beta = static_cast<int>(std::lround(90.0 / kBetaGridStepDeg));
    const auto rows = parallel_map(alphas.size(), exec, [&](std::size_t i) {
        std::optional<Candidate> best;
        for (int k = 1; k < n_beta; ++k) {
            const auto c = eta_at(alphas[i], k * kBetaStep);
            if (c && (!best || c->value > best->value)) {
                best = c;
            }
        }
        return best;
    });
    std::optional<Candidate> best;
    for (const auto& r : rows) {
        if (r && (!best || preferred(*r, *best))) {
            best = r;
        }
    }
    if (!best) {
        throw NoPositivePower("no scaling in the search window injects active power");
    }

    // Compass refinement over 8 directions so that diagonal ridges are followed.
    static constexpr std::array<std::pair<int, int>, 8> kDirs{
        {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
    double h_alpha = alpha_hi > alpha_lo ? kAlphaGridStep : 0.0;
    double h_beta = kBetaStep;
    Candidate cur = *best;
    for (int it = 0; it < kMaxRefineIterations && (h_alpha > kStepTolerance || h_beta > kStepTolerance); ++it) {
        std::optional<Candidate> step_best;
        for (const auto& [da, db] : kDirs) {
            const double a = std::clamp(cur.alpha + da * h_alpha, alpha_lo, alpha_hi);
            const double b = std::clamp(cur.beta + db * h_beta, 1e-15, kPi / 2.0);
            const auto c = eta_at(a, b);
            if (c && c->value > cur.value && (!step_best || c->value > step_best->value)) {
                step_best = c;
            }
        }
        if (step_best) {
            cur = *step_best;
        } else {
            h_alpha *= 0.5;
            h_beta *= 0.5;
        }
    }
    return {VoltageScaling{cur.alpha, cur.beta}, cur.value};
}

std::vector<VoltageCurvePoint> optimal_voltage_curve(const CableSpec& spec, const VoltageScaling& scaling,
                                                     std::span<const double> p_farm_targets,
                                                     const Constraints& constraints) {
    constraints.validate();
    const LimitModel model(spec, constraints);
    const LimitSample s = model.at(scaling.alpha, scaling.beta);
    if (!(s.coef.farm > 0.0)) {
        throw NoPositivePower("scaling injects no active power; voltage curve undefined");
    }
    const double current_per_pu = s.current_per_pu;

    std::vector<VoltageCurvePoint> out;
    out.reserve(p_farm_targets.size());
    for (const double p : p_farm_targets) {
        if (!(std::isfinite(p) && p >= 0.0)) {
            throw ConfigError("production targets must be finite and >= 0");
        }
        VoltageCurvePoint pt;
        pt.p_farm = p;
        pt.v2_opt = std::sqrt(p / s.coef.farm);
        pt.max_current = current_per_pu * pt.v2_opt;
        pt.exceeds_v2_max = pt.v2_opt > constraints.v2_max;
        pt.exceeds_current = pt.max_current > constraints.i_rated;
        out.push_back(pt);
    }
    return out;
}

OptimumPoint optimize_at_production(const CableSpec& spec, double p_farm, const Constraints& constraints) {
    constraints.validate();
    if (!(std::isfinite(p_farm) && p_farm > 0.0)) {
        throw ConfigError("production must be > 0");
    }
    const LimitModel model(spec, constraints);
    const ProductionSearch search(model, p_farm);
    auto best = search.best(kForwardWindow);
    if (!best) {
        best = search.best(kFullWindow);
    }
    if (!best) {
        throw Infeasible("no operating point within the limits transmits the requested production");
    }
    return make_point(spec, model, *best);
}

MaxTransfer max_feasible_power(const CableSpec& spec, const Constraints& constraints) {
    constraints.validate();
    const LimitModel model(spec, constraints);
    const TransferSearch search(model);
    auto best = search.best(kForwardWindow);
    if (!best) {
        best = search.best(kFullWindow);
    }
    if (!best) {
        throw Infeasible("rated current is exceeded even without power transfer");
    }
    MaxTransfer out;
    out.point = make_point(spec, model, *best);
    out.p_farm = out.point.flow.p_farm;
    out.p_grid = out.point.flow.p_grid;
    return out;
}

TransferEnvelope transfer_envelope(const CableSpec& spec_template, std::span<const double> lengths_km,
                                   std::span<const double> v2_values, const Constraints& constraints,
                                   Execution exec) {
    if (lengths_km.empty() || v2_values.empty()) {
        throw ConfigError("envelope needs at least one length and one voltage");
    }
    constraints.validate();
    const auto [v_lo, v_hi] = std::minmax_element(v2_values.begin(), v2_values.end());
    const std::size_t per_length = v2_values.size() + 1;

    // Task k: length k / per_length; the last slot of each length is the free-v2 envelope.
    auto points = parallel_map(lengths_km.size() * per_length, exec, [&](std::size_t k) {
        const std::size_t li = k / per_length;
        const std::size_t vi = k % per_length;
        const bool envelope = vi == v2_values.size();
        const double lo = envelope ? *v_lo : v2_values[vi];
        const double hi = envelope ? *v_hi : v2_values[vi];
        EnvelopePoint pt;
        pt.length_km = lengths_km[li];
        pt.v2 = hi;
        try {
            const MaxTransfer m =
                max_feasible_power(spec_template.with_length(lengths_km[li]), constraints.with_v2_range(lo, hi));
            pt.v2 = m.point.operating_point.v2;
            pt.p_grid_max = m.p_grid;
            pt.p_farm_at_max = m.p_farm;
            pt.scaling = m.point.operating_point.scaling;
            pt.feasible = true;
        } catch (const Infeasible&) {
            pt.feasible = false;
        }
        return pt;
    });

    TransferEnvelope out;
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (k % per_length == v2_values.size()) {
            out.envelope.push_back(points[k]);
        } else {
            out.fixed.push_back(points[k]);
        }
    }
    return out;
}

}  // namespace cablevolt
