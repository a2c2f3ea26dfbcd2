#include "realdyn/orbits.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <sstream>

#include "realdyn/error.hpp"
#include "vecmath.hpp"

namespace realdyn {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Cycle and budget checks run on iterations k with (k & kCheckMask) == kCheckMask.
constexpr std::int64_t kCheckMask = 127;
constexpr int kLanes = detail::kLanes;
using Lanes = std::array<double, kLanes>;
using detail::cos_lanes;
using detail::exp_lanes;
using detail::sin_lanes;

double frac(double x)
{
    const double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

double circle_distance(double a, double b)
{
    const double d = std::abs(a - b);
    const double r = d - std::floor(d);
    return std::min(r, 1.0 - r);
}

double phase_distance(bool circle, double a, double b) { return circle ? circle_distance(a, b) : std::abs(a - b); }

// Evaluates one map per lane. Cosine maps are stepped as R sin(x + phi).
class LaneStepper {
public:
    LaneStepper(FamilyKind kind, int terms) : kind_(kind), terms_(terms)
    {
        sin_.assign(static_cast<std::size_t>(terms), Lanes{});
        cos_.assign(static_cast<std::size_t>(terms), Lanes{});
        clear_all();
    }

    void load(int lane, const FamilyMap& f)
    {
        const auto l = static_cast<std::size_t>(lane);
        maps_[l] = &f;
        switch (kind_) {
        case FamilyKind::TrigLift: {
            const auto poly = f.trig();
            p0_[l] = poly.degree;
            p1_[l] = poly.constant;
            for (int j = 0; j < terms_; ++j) {
                const auto jj = static_cast<std::size_t>(j);
                const bool present = j < poly.modality();
                sin_[jj][l] = present ? poly.sin_coeffs[jj] : 0.0;
                cos_[jj][l] = present ? poly.cos_coeffs[jj] : 0.0;
            }
            refresh_cos();
            break;
        }
        case FamilyKind::Cosine: {
            const auto& p = f.as<CosineParams>();
            p0_[l] = std::hypot(p.a, p.b);
            p1_[l] = std::atan2(p.b, p.a);
            break;
        }
        case FamilyKind::StandardDeg: {
            const auto& p = f.as<StandardDegParams>();
            p0_[l] = p.a;
            p1_[l] = p.b;
            break;
        }
        case FamilyKind::Exponential: p1_[l] = f.as<ExponentialParams>().a; break;
        case FamilyKind::IntegralPE: break;
        }
    }

    void clear(int lane)
    {
        const auto l = static_cast<std::size_t>(lane);
        maps_[l] = nullptr;
        p0_[l] = p1_[l] = 0.0;
        for (auto& s : sin_)
            s[l] = 0.0;
        for (auto& c : cos_)
            c[l] = 0.0;
        refresh_cos();
    }

    void apply(const Lanes& x, Lanes& y)
    {
        switch (kind_) {
        case FamilyKind::TrigLift: {
            for (int l = 0; l < kLanes; ++l)
                y[l] = p0_[l] * x[l] + p1_[l];
            for (int j = 0; j < terms_; ++j) {
                const auto jj = static_cast<std::size_t>(j);
                const double omega = kTau * (j + 1);
                for (int l = 0; l < kLanes; ++l)
                    arg_[l] = omega * x[l];
                sin_lanes(arg_.data(), s_.data());
                const bool any_cos = any_cos_[jj] != 0;
                if (any_cos)
                    cos_lanes(arg_.data(), c_.data());
                for (int l = 0; l < kLanes; ++l) {
                    y[l] += sin_[jj][l] * s_[l];
                    if (any_cos)
                        y[l] += cos_[jj][l] * c_[l];
                }
            }
            break;
        }
        case FamilyKind::Cosine:
            for (int l = 0; l < kLanes; ++l)
                arg_[l] = x[l] + p1_[l];
            sin_lanes(arg_.data(), s_.data());
            for (int l = 0; l < kLanes; ++l)
                y[l] = p0_[l] * s_[l];
            break;
        case FamilyKind::StandardDeg:
            exp_lanes(x.data(), s_.data());
            for (int l = 0; l < kLanes; ++l)
                y[l] = p0_[l] * x[l] * s_[l] + p1_[l];
            break;
        case FamilyKind::Exponential:
            exp_lanes(x.data(), s_.data());
            for (int l = 0; l < kLanes; ++l)
                y[l] = s_[l] + p1_[l];
            break;
        case FamilyKind::IntegralPE:
            for (int l = 0; l < kLanes; ++l) {
                const auto* f = maps_[static_cast<std::size_t>(l)];
                y[l] = f ? eval(*f, x[l]).value : 0.0;
            }
            break;
        }
    }

private:
    void refresh_cos()
    {
        any_cos_.resize(cos_.size());
        for (std::size_t j = 0; j < cos_.size(); ++j)
            any_cos_[j] = std::any_of(cos_[j].begin(), cos_[j].end(), [](double c) { return c != 0.0; }) ? 1 : 0;
    }

    void clear_all()
    {
        for (int l = 0; l < kLanes; ++l)
            clear(l);
    }

    FamilyKind kind_;
    int terms_;
    Lanes p0_{};
    Lanes p1_{};
    std::vector<Lanes> sin_;
    std::vector<Lanes> cos_;
    std::vector<char> any_cos_;
    std::array<const FamilyMap*, kLanes> maps_{};
    Lanes arg_{};
    Lanes s_{};
    Lanes c_{};
};

// Smallest p whose last three p-blocks repeat; at(i) is the i-th most recent sample.
template <class At>
std::optional<int> repeating_period(At at, std::int64_t count, double eps, int max_period, bool circle)
{
    const auto limit = static_cast<int>(std::min<std::int64_t>(max_period, count / 4));
    for (int p = 1; p <= limit; ++p) {
        bool ok = true;
        for (int i = 0; i < 3 * p && ok; ++i)
            ok = phase_distance(circle, at(i), at(i + p)) < eps;
        if (ok)
            return p;
    }
    return std::nullopt;
}

SingularFate undecided(UndecidedReason reason, std::int64_t iterations)
{
    SingularFate fate;
    fate.tag = FateTag::Undecided;
    fate.reason = reason;
    fate.iterations = iterations;
    return fate;
}

using V2d = double __attribute__((vector_size(16)));
using V2l = long long __attribute__((vector_size(16)));

// True if some lo[0 .. n) lies within eps of x0.
template <bool Circle>
bool any_close(const double* lo, int n, double x0, double eps)
{
    const V2d c = {x0, x0};
    const V2d e = {eps, eps};
    const V2d one = {1.0, 1.0};
    const V2l abs_mask = {0x7fffffffffffffffLL, 0x7fffffffffffffffLL};
    V2l hit = {0, 0};
    int q = 0;
    for (; q + 2 <= n; q += 2) {
        V2d v;
        std::memcpy(&v, lo + q, sizeof v);
        V2d d = reinterpret_cast<V2d>(reinterpret_cast<V2l>(c - v) & abs_mask);
        if constexpr (Circle)
            d = d < one - d ? d : one - d;
        hit |= d < e;
    }
    bool any = (hit[0] | hit[1]) != 0;
    for (; q < n; ++q) {
        double d = std::abs(x0 - lo[q]);
        if constexpr (Circle)
            d = std::min(d, 1.0 - d);
        any = any || d < eps;
    }
    return any;
}

// Smallest p whose last three p-blocks repeat, for samples w[0], w[-1], ...
// (w[0] newest); the first comparison rejects almost every p cheaply.
template <bool Circle>
std::optional<int> recent_period(const double* w, std::int64_t count, double eps, int max_period)
{
    const auto dist = [](double a, double b) {
        const double d = std::abs(a - b);
        if constexpr (Circle)
            return std::min(d, 1.0 - d);
        else
            return d;
    };
    const auto limit = static_cast<int>(std::min<std::int64_t>(max_period, count / 4));
    const double x0 = w[0];
    // Branch-free screening pass over w[-limit .. -1]; chaotic orbits stop here.
    if (!any_close<Circle>(w - limit, limit, x0, eps))
        return std::nullopt;
    for (int p = 1; p <= limit; ++p) {
        if (!(dist(x0, w[-p]) < eps))
            continue;
        bool ok = true;
        for (int i = 1; i < 3 * p && ok; ++i)
            ok = dist(w[-i], w[-i - p]) < eps;
        if (ok)
            return p;
    }
    return std::nullopt;
}

// State of one orbit. The driver alternates observe() on the current point
// with advance() on its image until either returns a fate.
class OrbitLane {
public:
    explicit OrbitLane(const Budget& budget) : budget_(budget)
    {
        cap_ = std::bit_ceil(static_cast<std::size_t>(4 * budget.max_period + 8));
        // Every sample is stored twice so the latest cap_ samples are contiguous.
        ring_.assign(2 * cap_, 0.0);
    }

    void start(const FamilyMap& f, double v, const EscapeRadii& radii)
    {
        f_ = &f;
        radii_ = radii;
        min_radius_ = f.circle_map() ? kInf : std::min(radii.plus, radii.minus);
        circle_ = f.circle_map();
        x_ = circle_ ? frac(v) : v;
        k_ = 0;
        count_ = 0;
        recurrent_ = false;
        probe_at_ = 255;
        probe_gap_ = 256;
        run_ = 0;
        last_abs_ = 0.0;
        first_sign_ = last_sign_ = 1;
        same_sign_ = alternating_ = true;
    }

    double x() const { return x_; }

    /// Records the current point; true once the orbit has a fate (see result()).
    bool observe()
    {
        const std::size_t slot = static_cast<std::size_t>(count_) & (cap_ - 1);
        ring_[slot] = x_;
        ring_[slot + cap_] = x_;
        ++count_;
        if (!circle_) {
            if (std::abs(x_) >= min_radius_) {
                if (track_escape(x_))
                    return finish(escaped(k_));
            } else {
                run_ = 0;
            }
        }
        if ((k_ & kCheckMask) == kCheckMask || k_ >= budget_.max_iter) {
            if (auto fate = periodic_checks())
                return finish(std::move(*fate));
        }
        next_event_ = std::min<std::int64_t>((k_ + 1) | kCheckMask, budget_.max_iter);
        return false;
    }

    SingularFate& result() { return result_; }

    // Hot state mirrored by the driver between slow steps; count_ == k_ + 1.
    double* ring() { return ring_.data(); }
    std::size_t capacity() const { return cap_; }
    std::int64_t iteration() const { return k_; }
    std::int64_t next_event() const { return next_event_; }
    double min_radius() const { return min_radius_; }
    void resume(std::int64_t k, double x)
    {
        if (k == k_)
            return;
        // Fast steps stay inside every escape radius.
        k_ = k;
        count_ = k + 1;
        x_ = x;
        run_ = 0;
    }

    /// Moves to the image y of the current point.
    [[gnu::noinline]] bool advance(double y)
    {
        if (!std::isfinite(y)) [[unlikely]] {
            const int s = (!std::isnan(y) && y < 0.0) ? -1 : 1;
            if (!circle_ && run_ > 0 && radius(s) < kInf) {
                // Beyond the radius and past the double range: further growth is
                // guaranteed by the margin, but no longer representable.
                note_sign(s);
                return finish(escaped(k_ + 1));
            }
            y = s * std::numeric_limits<double>::max();
        }
        x_ = circle_ ? frac(y) : y;
        ++k_;
        return observe();
    }

private:
    bool finish(SingularFate fate)
    {
        result_ = std::move(fate);
        return true;
    }

    const double* newest() const { return &ring_[((static_cast<std::size_t>(count_) - 1) & (cap_ - 1)) + cap_]; }

    [[gnu::noinline]] std::optional<SingularFate> periodic_checks()
    {
        if ((k_ & kCheckMask) == kCheckMask) {
            const double* w = newest();
            const auto p = circle_ ? recent_period<true>(w, count_, budget_.cycle_eps, budget_.max_period)
                                   : recent_period<false>(w, count_, budget_.cycle_eps, budget_.max_period);
            if (p) {
                if (auto fate = judge_cycle(w[0], *p, false))
                    return fate;
            } else if (k_ >= probe_at_) {
                if (auto fate = probe_parabolic(w))
                    return fate;
                probe_at_ = k_ + probe_gap_;
                probe_gap_ *= 2;
            }
        }
        if (k_ >= budget_.max_iter)
            return undecided(recurrent_ ? UndecidedReason::NonConvergentRecurrence : UndecidedReason::Budget, k_);
        return std::nullopt;
    }

    double radius(int sign) const { return sign > 0 ? radii_.plus : radii_.minus; }

    SingularFate escaped(std::int64_t k) const
    {
        SingularFate fate;
        fate.tag = FateTag::Escaping;
        fate.direction = same_sign_ ? (first_sign_ > 0 ? EscapeDirection::Plus : EscapeDirection::Minus)
                                    : EscapeDirection::Alternating;
        fate.iterations = k;
        return fate;
    }

    void note_sign(int s)
    {
        if (s != first_sign_)
            same_sign_ = false;
        if (s == last_sign_)
            alternating_ = false;
        last_sign_ = s;
    }

    // True once the orbit has grown in modulus for escape_confirm consecutive
    // steps while staying beyond the escape radius.
    bool track_escape(double x)
    {
        const double ax = std::abs(x);
        const int s = x < 0.0 ? -1 : 1;
        if (ax < radius(s)) {
            run_ = 0;
            return false;
        }
        if (run_ > 0 && ax > last_abs_) {
            ++run_;
            note_sign(s);
        } else {
            run_ = 1;
            first_sign_ = s;
            last_sign_ = s;
            same_sign_ = true;
            alternating_ = true;
        }
        last_abs_ = ax;
        return run_ > budget_.escape_confirm;
    }

    std::optional<SingularFate> judge_cycle(double x, int period, bool parabolic_only)
    {
        CycleCandidate cycle;
        try {
            cycle = refine_cycle(*f_, x, period);
        } catch (const Error&) {
            recurrent_ = true;
            return std::nullopt;
        }
        const double m = std::abs(cycle.multiplier);
        SingularFate fate;
        fate.iterations = k_;
        if (std::abs(m - 1.0) <= budget_.tol_par) {
            fate.tag = FateTag::Parabolic;
        } else if (parabolic_only) {
            return std::nullopt;
        } else if (m <= 1.0 - budget_.tol_hyp) {
            fate.tag = FateTag::Attracted;
        } else if (m < 1.0) {
            return undecided(UndecidedReason::NearNeutral, k_);
        } else {
            recurrent_ = true;
            return std::nullopt;
        }
        fate.cycle = std::move(cycle);
        return fate;
    }

    // Parabolic basins converge algebraically, far too slowly to meet cycle_eps
    // within budget; a looser recurrence test with shrinking block steps hands
    // the point to Newton and only accepts a parabolic verdict.
    std::optional<SingularFate> probe_parabolic(const double* w)
    {
        const double loose = std::sqrt(budget_.cycle_eps);
        const auto limit = static_cast<int>(std::min<std::int64_t>(budget_.max_period, count_ / 4));
        for (int p = 1; p <= limit; ++p) {
            const double d0 = phase_distance(circle_, w[0], w[-p]);
            if (!(d0 < loose))
                continue;
            const double d1 = phase_distance(circle_, w[-p], w[-2 * p]);
            const double d2 = phase_distance(circle_, w[-2 * p], w[-3 * p]);
            if (d0 <= d1 && d1 <= d2)
                return judge_cycle(w[0], p, true);
            return std::nullopt;
        }
        return std::nullopt;
    }

    const Budget& budget_;
    const FamilyMap* f_ = nullptr;
    EscapeRadii radii_;
    double min_radius_ = kInf;
    bool circle_ = false;
    double x_ = 0.0;
    std::int64_t k_ = 0;
    std::int64_t next_event_ = 0;
    std::vector<double> ring_;
    std::size_t cap_ = 0;
    std::int64_t count_ = 0;
    bool recurrent_ = false;
    std::int64_t probe_at_ = 255;
    std::int64_t probe_gap_ = 256;

    int run_ = 0;
    double last_abs_ = 0.0;
    int first_sign_ = 1;
    int last_sign_ = 1;
    bool same_sign_ = true;
    bool alternating_ = true;
    SingularFate result_;
};

// Runs jobs of one family kind through kLanes orbits in lockstep. The common
// step (inside the escape radii, no check due) runs on local copies of the
// lane state; anything else goes through OrbitLane::advance.
template <bool Circle>
void run_lanes(std::span<const OrbitJob> jobs, std::span<const std::size_t> order, const Budget& budget,
               LaneStepper& stepper, std::vector<SingularFate>& out)
{
    std::vector<OrbitLane> lanes(kLanes, OrbitLane(budget));
    std::array<std::size_t, kLanes> job_of{};
    std::array<bool, kLanes> busy{};
    Lanes x{};
    Lanes y{};
    Lanes min_radius{};
    std::array<std::int64_t, kLanes> k{};
    std::array<std::int64_t, kLanes> next_event{};
    std::array<double*, kLanes> ring{};
    const std::size_t cap = lanes.front().capacity();
    const std::size_t mask = cap - 1;
    std::size_t next = 0;
    int active = 0;

    const auto load = [&](std::size_t l) {
        x[l] = lanes[l].x();
        k[l] = lanes[l].iteration();
        next_event[l] = lanes[l].next_event();
        min_radius[l] = lanes[l].min_radius();
        ring[l] = lanes[l].ring();
    };
    // Feeds lane l until it holds an orbit that needs another step.
    const auto fill = [&](std::size_t l) {
        if (busy[l])
            --active;
        busy[l] = false;
        stepper.clear(static_cast<int>(l));
        x[l] = 0.0;
        k[l] = 0;
        next_event[l] = 1;  // idle lanes always take the slow branch
        while (next < order.size()) {
            const auto idx = order[next++];
            const auto& job = jobs[idx];
            if (!std::isfinite(job.value)) {
                out[idx] = undecided(UndecidedReason::UndeterminedValue, 0);
                continue;
            }
            lanes[l].start(*job.map, job.value, job.radii);
            if (lanes[l].observe()) {
                out[idx] = std::move(lanes[l].result());
                continue;
            }
            job_of[l] = idx;
            busy[l] = true;
            ++active;
            stepper.load(static_cast<int>(l), *job.map);
            load(l);
            return;
        }
    };

    for (std::size_t l = 0; l < kLanes; ++l)
        fill(l);
    while (active > 0) {
        stepper.apply(x, y);
        for (std::size_t l = 0; l < kLanes; ++l) {
            const double yl = y[l];
            double xl = yl;
            bool fast = k[l] + 1 != next_event[l];
            if constexpr (Circle) {
                // Truncation instead of floor; |y| < 2^52 keeps the cast exact.
                fast = fast && std::abs(yl) < 0x1p52;
                if (fast) {
                    xl = yl - static_cast<double>(static_cast<std::int64_t>(yl));
                    xl = xl < 0.0 ? xl + 1.0 : xl;
                    xl = xl >= 1.0 ? 0.0 : xl;
                }
            } else {
                fast = fast && std::abs(yl) < min_radius[l];
            }
            if (fast) [[likely]] {
                x[l] = xl;
                const auto kl = ++k[l];
                const std::size_t slot = static_cast<std::size_t>(kl) & mask;
                ring[l][slot] = xl;
                ring[l][slot + cap] = xl;
                continue;
            }
            if (!busy[l]) {
                next_event[l] = k[l] + 1;
                continue;
            }
            lanes[l].resume(k[l], x[l]);
            if (lanes[l].advance(yl)) {
                out[job_of[l]] = std::move(lanes[l].result());
                fill(l);
            } else {
                load(l);
            }
        }
    }
}

void classify_kind(std::span<const OrbitJob> jobs, std::span<const std::size_t> order, const Budget& budget,
                   std::vector<SingularFate>& out)
{
    const FamilyKind kind = jobs[order.front()].map->kind();
    int terms = 0;
    if (kind == FamilyKind::TrigLift) {
        for (auto idx : order)
            terms = std::max(terms, jobs[idx].map->trig().modality());
    }
    LaneStepper stepper(kind, terms);
    if (kind == FamilyKind::TrigLift)
        run_lanes<true>(jobs, order, budget, stepper, out);
    else
        run_lanes<false>(jobs, order, budget, stepper, out);
}

}  // namespace

EscapeRadii escape_radii(const FamilyMap& f, std::span<const SingularValueInfo> values)
{
    if (f.circle_map() || f.kind() == FamilyKind::Cosine)
        return {kInf, kInf};
    double vmax = 1.0;
    for (const auto& v : values) {
        if (v.determined && std::isfinite(v.value))
            vmax = std::max(vmax, std::abs(v.value));
    }
    const double start = std::exp2(std::floor(std::log2(vmax)) + 1.0);
    EscapeRadii out{kInf, kInf};
    for (int sigma : {1, -1}) {
        double r = start;
        for (int attempt = 0; attempt < 40; ++attempt, r *= 2.0) {
            bool margin = true;
            for (int i = 0; i <= 128 && margin; ++i) {
                const double x = r * std::exp2(i / 8.0);
                const auto v = eval(f, sigma * x);
                if (v.overflowed())
                    continue;
                margin = std::abs(v.value) > x + 1.0;
            }
            if (margin) {
                (sigma > 0 ? out.plus : out.minus) = r;
                break;
            }
        }
    }
    return out;
}

void Budget::validate() const
{
    const auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
    if (max_iter < 0)
        bad("max_iter must be >= 0");
    if (!(cycle_eps > 0.0))
        bad("cycle_eps must be > 0");
    if (!(tol_hyp > 0.0 && tol_hyp < 1.0))
        bad("tol_hyp must lie in (0, 1)");
    if (!(tol_par > 0.0 && tol_par < 1.0))
        bad("tol_par must lie in (0, 1)");
    if (escape_confirm < 1)
        bad("escape_confirm must be >= 1");
    if (max_period < 1)
        bad("max_period must be >= 1");
}

std::string_view to_string(FateTag tag)
{
    switch (tag) {
    case FateTag::Attracted: return "attracted";
    case FateTag::Parabolic: return "parabolic";
    case FateTag::Escaping: return "escaping";
    case FateTag::Undecided: return "undecided";
    }
    return "?";
}

std::string_view to_string(EscapeDirection dir)
{
    switch (dir) {
    case EscapeDirection::Plus: return "+inf";
    case EscapeDirection::Minus: return "-inf";
    case EscapeDirection::Alternating: return "alternating";
    }
    return "?";
}

std::string_view to_string(UndecidedReason reason)
{
    switch (reason) {
    case UndecidedReason::Budget: return "budget";
    case UndecidedReason::NearNeutral: return "near-neutral";
    case UndecidedReason::NonConvergentRecurrence: return "non-convergent-recurrence";
    case UndecidedReason::UndeterminedValue: return "undetermined-value";
    }
    return "?";
}

std::string_view to_string(MapClassTag tag)
{
    switch (tag) {
    case MapClassTag::Hyperbolic: return "hyperbolic";
    case MapClassTag::RealHyperbolic: return "real-hyperbolic";
    case MapClassTag::NotDecided: return "not-decided";
    case MapClassTag::CandidateNonHyperbolic: return "candidate-non-hyperbolic";
    }
    return "?";
}

Orbit iterate(const FamilyMap& f, double x0, std::int64_t n)
{
    if (n < 0)
        throw Error(ErrorCode::InvalidParameter, "iteration count must be >= 0");
    const bool circle = f.circle_map();
    Orbit orbit;
    orbit.points.reserve(static_cast<std::size_t>(std::min<std::int64_t>(n, 1 << 20)) + 1);
    double x = circle ? frac(x0) : x0;
    orbit.points.push_back(x);
    for (std::int64_t i = 0; i < n; ++i) {
        const auto r = eval(f, x);
        if (r.overflowed()) {
            orbit.overflow_sign = r.overflow;
            break;
        }
        x = circle ? frac(r.value) : r.value;
        orbit.points.push_back(x);
    }
    return orbit;
}

std::optional<DetectedCycle> detect_cycle(std::span<const double> orbit, double eps, int max_period, bool circle)
{
    if (!(eps > 0.0))
        throw Error(ErrorCode::InvalidParameter, "cycle tolerance must be > 0");
    const auto n = static_cast<std::int64_t>(orbit.size());
    const auto at = [&](std::int64_t back) { return orbit[static_cast<std::size_t>(n - 1 - back)]; };
    if (auto p = repeating_period(at, n, eps, max_period, circle))
        return DetectedCycle{*p, at(0)};
    return std::nullopt;
}

namespace {

struct CycleTrace {
    std::vector<double> points;
    double multiplier = 1.0;
    double closing = 0.0;  // signed F^p(x) - x, wrapped for circle maps
    bool finite = true;
};

CycleTrace trace_cycle(const FamilyMap& f, double x, int period)
{
    const bool circle = f.circle_map();
    CycleTrace t;
    t.points.reserve(static_cast<std::size_t>(period));
    double y = x;
    for (int i = 0; i < period; ++i) {
        t.points.push_back(y);
        const auto r = eval(f, y, true);
        if (r.overflowed() || !std::isfinite(r.derivative)) {
            t.finite = false;
            return t;
        }
        t.multiplier *= r.derivative;
        y = circle ? frac(r.value) : r.value;
    }
    t.closing = y - x;
    if (circle)
        t.closing -= std::nearbyint(t.closing);
    return t;
}

CycleCandidate finish_cycle(const FamilyMap& f, double x, int period)
{
    const bool circle = f.circle_map();
    auto trace = trace_cycle(f, x, period);
    for (int q = 1; q < period; ++q) {
        if (period % q == 0 && phase_distance(circle, trace.points[static_cast<std::size_t>(q)], x) < 1e-9) {
            period = q;
            trace = trace_cycle(f, x, period);
            break;
        }
    }
    CycleCandidate c;
    c.period = period;
    c.points = trace.points;
    c.multiplier = trace.multiplier;
    for (int i = 0; i < period; ++i) {
        const double image = eval(f, c.points[static_cast<std::size_t>(i)]).value;
        const double next = c.points[static_cast<std::size_t>((i + 1) % period)];
        c.residual = std::max(c.residual, phase_distance(circle, circle ? frac(image) : image, next));
    }
    return c;
}

}  // namespace

CycleCandidate refine_cycle(const FamilyMap& f, double x, int period)
{
    if (period < 1)
        throw Error(ErrorCode::InvalidParameter, "cycle period must be >= 1");
    const bool circle = f.circle_map();
    if (circle)
        x = frac(x);
    for (int step = 0; step <= 64; ++step) {
        const auto t = trace_cycle(f, x, period);
        if (!t.finite || !std::isfinite(x))
            break;
        const double slope = t.multiplier - 1.0;
        const double scale = 1.0 + std::abs(x);
        // Near a multiple root the residual is tiny long before x is accurate,
        // so the Newton step must be small as well.
        if (t.closing == 0.0 ||
            (std::abs(t.closing) <= 1e-12 * scale && std::abs(t.closing) <= 1e-10 * scale * std::abs(slope)))
            return finish_cycle(f, x, period);
        if (slope == 0.0 || step == 64)
            break;
        x -= t.closing / slope;
        if (circle)
            x = frac(x);
    }
    std::ostringstream msg;
    msg << "Newton refinement of a period-" << period << " orbit did not converge within 64 steps";
    throw Error(ErrorCode::RefinementFailed, msg.str());
}

EscapeRadii escape_radii(const FamilyMap& f) { return escape_radii(f, singular_values(f)); }

SingularFate classify_singular_orbit(const FamilyMap& f, double v, const Budget& budget)
{
    return classify_singular_orbit(f, v, budget, escape_radii(f));
}

SingularFate classify_singular_orbit(const FamilyMap& f, double v, const Budget& budget, const EscapeRadii& radii)
{
    const OrbitJob job{&f, v, radii};
    return classify_orbits({&job, 1}, budget).front();
}

std::vector<SingularFate> classify_orbits(std::span<const OrbitJob> jobs, const Budget& budget)
{
    budget.validate();
    std::vector<SingularFate> out(jobs.size());
    for (auto kind : {FamilyKind::TrigLift, FamilyKind::Cosine, FamilyKind::StandardDeg, FamilyKind::Exponential,
                      FamilyKind::IntegralPE}) {
        std::vector<std::size_t> order;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (jobs[i].map->kind() == kind)
                order.push_back(i);
        }
        if (!order.empty())
            classify_kind(jobs, order, budget, out);
    }
    return out;
}

MapClassTag aggregate(std::span<const SingularFate> fates)
{
    bool parabolic = false;
    bool undecided_seen = false;
    bool all_attracted = true;
    for (const auto& fate : fates) {
        parabolic |= fate.tag == FateTag::Parabolic;
        undecided_seen |= fate.tag == FateTag::Undecided;
        all_attracted &= fate.tag == FateTag::Attracted;
    }
    if (parabolic)
        return MapClassTag::CandidateNonHyperbolic;
    if (undecided_seen)
        return MapClassTag::NotDecided;
    return all_attracted ? MapClassTag::Hyperbolic : MapClassTag::RealHyperbolic;
}

MapClass classify_map(const FamilyMap& f, const Budget& budget)
{
    budget.validate();
    MapClass out;
    out.singular_values = singular_values(f);
    const auto radii = escape_radii(f, out.singular_values);
    std::vector<OrbitJob> jobs;
    for (const auto& sv : out.singular_values)
        jobs.push_back({&f, sv.determined ? sv.value : std::numeric_limits<double>::quiet_NaN(), radii});
    out.fates = classify_orbits(jobs, budget);
    out.tag = aggregate(out.fates);
    return out;
}

}  // namespace realdyn
