#include "mdep/mdsearch.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include "mdep/errors.hpp"
#include "mdep/inequalities.hpp"
#include "mdep/random.hpp"

namespace mdep {

// ------------------------------------------------------------------ config

void SearchConfig::validate() const {
    if (lambda_count == 0 || lambda_count > kMaxLambdaCount)
        throw InvalidInput("lambda_count must be in [1, " + std::to_string(kMaxLambdaCount) + "]");
    if (restarts == 0) throw InvalidInput("restarts must be positive");
    if (max_iterations == 0) throw InvalidInput("max_iterations must be positive");
    if (!(initial_temperature > 0.0)) throw InvalidInput("initial_temperature must be positive");
    if (!(cooling_rate > 0.0 && cooling_rate < 1.0)) throw InvalidInput("cooling_rate must lie in (0,1)");
    if (!(penalty_weight > 0.0)) throw InvalidInput("penalty_weight must be positive");
    if (!(dirichlet_concentration > 0.0)) throw InvalidInput("dirichlet_concentration must be positive");
    if (!(response_step > 0.0)) throw InvalidInput("response_step must be positive");
    if (!(tolerance_s >= 0.0)) throw InvalidInput("tolerance_s must be nonnegative");
    if (!(tolerance_cmd >= 0.0)) throw InvalidInput("tolerance_cmd must be nonnegative");
    if (settings.alice_count() != 2 || settings.bob_count() != 2)
        throw InvalidInput("search runs on a 2x2 setting space");
    for (double p : settings.marginal())
        if (!(p > 0.0)) throw InvalidInput("setting_marginal entries must be strictly positive");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    if constexpr (std::is_floating_point_v<T>) {
        char* end = nullptr;
        out = std::strtod(value.c_str(), &end);
        if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(out))
            throw InvalidInput("config key '" + key + "': '" + value + "' is not a number");
    } else {
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw InvalidInput("config key '" + key + "': '" + value + "' is not a nonnegative integer");
    }
    return out;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SearchConfig parse_search_config(std::string_view text, SearchConfig cfg) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));

        if (key == "lambda_count") cfg.lambda_count = parse_number<std::size_t>(key, value);
        else if (key == "restarts") cfg.restarts = parse_number<std::size_t>(key, value);
        else if (key == "max_iterations") cfg.max_iterations = parse_number<std::size_t>(key, value);
        else if (key == "initial_temperature") cfg.initial_temperature = parse_number<double>(key, value);
        else if (key == "cooling_rate") cfg.cooling_rate = parse_number<double>(key, value);
        else if (key == "penalty_weight") cfg.penalty_weight = parse_number<double>(key, value);
        else if (key == "max_reanneals") cfg.max_reanneals = parse_number<std::size_t>(key, value);
        else if (key == "dirichlet_concentration") cfg.dirichlet_concentration = parse_number<double>(key, value);
        else if (key == "response_step") cfg.response_step = parse_number<double>(key, value);
        else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
        else if (key == "tolerance_s") cfg.tolerance_s = parse_number<double>(key, value);
        else if (key == "tolerance_cmd") cfg.tolerance_cmd = parse_number<double>(key, value);
        else if (key == "threads") cfg.threads = parse_number<std::size_t>(key, value);
        else if (key == "setting_marginal") {
            std::vector<double> marginal;
            std::stringstream parts(value);
            std::string item;
            while (std::getline(parts, item, ',')) marginal.push_back(parse_number<double>(key, trim(item)));
            cfg.settings = SettingSpace(2, 2, std::move(marginal));
        } else {
            throw InvalidInput("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

SearchConfig load_search_config(const std::filesystem::path& path, SearchConfig base) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_search_config(buf.str(), std::move(base));
}

std::vector<std::pair<std::string, std::string>> describe(const SearchConfig& cfg) {
    std::string marginal;
    for (double p : cfg.settings.marginal()) {
        if (!marginal.empty()) marginal += ",";
        marginal += format_double(p);
    }
    return {
        {"lambda_count", std::to_string(cfg.lambda_count)},
        {"restarts", std::to_string(cfg.restarts)},
        {"max_iterations", std::to_string(cfg.max_iterations)},
        {"initial_temperature", format_double(cfg.initial_temperature)},
        {"cooling_rate", format_double(cfg.cooling_rate)},
        {"penalty_weight", format_double(cfg.penalty_weight)},
        {"max_reanneals", std::to_string(cfg.max_reanneals)},
        {"dirichlet_concentration", format_double(cfg.dirichlet_concentration)},
        {"response_step", format_double(cfg.response_step)},
        {"seed", std::to_string(cfg.seed)},
        {"tolerance_s", format_double(cfg.tolerance_s)},
        {"tolerance_cmd", format_double(cfg.tolerance_cmd)},
        {"threads", std::to_string(cfg.threads)},
        {"setting_marginal", marginal},
    };
}

// ------------------------------------------------------------------ search

namespace {

constexpr std::size_t kJoint = 4;
constexpr double kFeasEps = 1e-12;
constexpr double kBitEps = 1e-14;

enum class Goal { MinCmd, MaxChsh };

struct Problem {
    Goal goal;
    double level;  // target S for MinCmd, bit budget for MaxChsh
    std::size_t lambdas;
    std::array<double, kJoint> pz;
    std::array<std::size_t, kJoint> za{0, 0, 1, 1};
    std::array<std::size_t, kJoint> zb{0, 1, 0, 1};
};

// q: (joint setting, lambda) row-major. Responses: (setting, lambda) row-major.
struct State {
    std::vector<double> q;
    std::vector<double> pa;
    std::vector<double> pb;
};

struct Scores {
    std::array<double, kJoint> e{};
    double s = 0.0;
    double bits = 0.0;
};

double mi_bits(const Problem& P, const std::vector<double>& q) {
    const std::size_t L = P.lambdas;
    std::array<double, kMaxLambdaCount> r{};
    for (std::size_t z = 0; z < kJoint; ++z)
        for (std::size_t l = 0; l < L; ++l) r[l] += P.pz[z] * q[z * L + l];
    double mi = 0.0;
    for (std::size_t z = 0; z < kJoint; ++z)
        for (std::size_t l = 0; l < L; ++l) {
            const double v = q[z * L + l];
            if (v > 0.0) mi += P.pz[z] * v * std::log2(v / r[l]);
        }
    return std::max(mi, 0.0);
}

Scores score(const Problem& P, const State& st) {
    const std::size_t L = P.lambdas;
    Scores sc;
    for (std::size_t z = 0; z < kJoint; ++z) {
        double e = 0.0;
        for (std::size_t l = 0; l < L; ++l)
            e += st.q[z * L + l] * (2.0 * st.pa[P.za[z] * L + l] - 1.0) * (2.0 * st.pb[P.zb[z] * L + l] - 1.0);
        sc.e[z] = e;
    }
    sc.s = chsh_value(std::span<const double, 4>(sc.e));
    sc.bits = mi_bits(P, st.q);
    return sc;
}

double objective(const Problem& P, const Scores& sc, double weight) {
    if (P.goal == Goal::MinCmd) return sc.bits + weight * std::max(0.0, P.level - sc.s);
    return -sc.s + weight * std::max(0.0, sc.bits - P.level);
}

bool feasible(const Problem& P, const Scores& sc, double s_slack, double bit_slack) {
    if (P.goal == Goal::MinCmd) return sc.s >= P.level - s_slack;
    return sc.bits <= P.level + bit_slack;
}

// Strictly better under the goal: feasibility first, then the objective,
// then the secondary quantity.
bool better(const Problem& P, const Scores& a, const Scores& b, double s_slack, double bit_slack) {
    const bool fa = feasible(P, a, s_slack, bit_slack);
    const bool fb = feasible(P, b, s_slack, bit_slack);
    if (fa != fb) return fa;
    if (P.goal == Goal::MinCmd) {
        if (!fa) return a.s > b.s + kFeasEps;
        if (std::abs(a.bits - b.bits) > kFeasEps) return a.bits < b.bits;
        return a.s > b.s + kFeasEps;
    }
    if (!fa) return a.bits < b.bits - kFeasEps;
    if (std::abs(a.s - b.s) > kFeasEps) return a.s > b.s;
    return a.bits < b.bits - kFeasEps;
}

void normalize_row(std::span<double> row) {
    double sum = 0.0;
    for (double v : row) sum += v;
    for (double& v : row) v /= sum;
}

State random_state(const Problem& P, Rng& rng) {
    const std::size_t L = P.lambdas;
    State st;
    st.q.resize(kJoint * L);
    std::gamma_distribution<double> g1(1.0, 1.0);
    for (std::size_t z = 0; z < kJoint; ++z) {
        for (std::size_t l = 0; l < L; ++l) st.q[z * L + l] = g1(rng) + 1e-300;
        normalize_row(std::span<double>(st.q).subspan(z * L, L));
    }
    st.pa.resize(2 * L);
    st.pb.resize(2 * L);
    for (double& v : st.pa) v = uniform01(rng);
    for (double& v : st.pb) v = uniform01(rng);
    return st;
}

// ------------------------------------------------------------- annealing

State anneal(const Problem& P, const State& start, double weight, const SearchConfig& cfg, Rng& rng) {
    const std::size_t L = P.lambdas;
    State cur = start;
    double f_cur = objective(P, score(P, cur), weight);
    State best = cur;
    double f_best = f_cur;
    double temperature = cfg.initial_temperature;
    std::normal_distribution<double> normal(0.0, 1.0);

    for (std::size_t it = 0; it < cfg.max_iterations; ++it, temperature *= cfg.cooling_rate) {
        State next = cur;
        const double scale = std::max(0.05, std::sqrt(temperature / cfg.initial_temperature));
        if (uniform01(rng) < 0.5) {
            // Dirichlet proposal centred on the current row.
            const std::size_t z = static_cast<std::size_t>(uniform01(rng) * kJoint);
            auto row = std::span<double>(next.q).subspan(z * L, L);
            const double kappa = cfg.dirichlet_concentration / scale;
            double sum = 0.0;
            for (double& v : row) {
                std::gamma_distribution<double> g(kappa * v + 0.02, 1.0);
                v = g(rng);
                sum += v;
            }
            if (!(sum > 0.0)) continue;
            for (double& v : row) v /= sum;
        } else {
            auto& table = uniform01(rng) < 0.5 ? next.pa : next.pb;
            const std::size_t idx = static_cast<std::size_t>(uniform01(rng) * double(table.size()));
            if (uniform01(rng) < 0.1) {
                table[idx] = table[idx] < 0.5 ? 1.0 : 0.0;
            } else {
                table[idx] = std::clamp(table[idx] + cfg.response_step * scale * normal(rng), 0.0, 1.0);
            }
        }
        const double f_next = objective(P, score(P, next), weight);
        const double delta = f_next - f_cur;
        if (delta <= 0.0 || uniform01(rng) < std::exp(-delta / temperature)) {
            cur = std::move(next);
            f_cur = f_next;
            if (f_cur < f_best) {
                best = cur;
                f_best = f_cur;
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------- polish

// Per-lambda gain g(z, l) of the chosen CHSH placement.
std::vector<double> gains(const Problem& P, const State& st, ChshForm form) {
    const std::size_t L = P.lambdas;
    std::vector<double> g(kJoint * L);
    for (std::size_t z = 0; z < kJoint; ++z) {
        const double sz = form.sign * (static_cast<int>(z) == form.minus_position ? -1.0 : 1.0);
        for (std::size_t l = 0; l < L; ++l)
            g[z * L + l] =
                sz * (2.0 * st.pa[P.za[z] * L + l] - 1.0) * (2.0 * st.pb[P.zb[z] * L + l] - 1.0);
    }
    return g;
}

// The placement is linear in every single response entry once q is fixed,
// so moving each entry to the better endpoint never lowers it. C_MD does
// not involve responses at all.
void round_responses(const Problem& P, State& st, ChshForm form) {
    const std::size_t L = P.lambdas;
    for (int sweep = 0; sweep < 16; ++sweep) {
        bool changed = false;
        for (int party = 0; party < 2; ++party) {
            auto& mine = party == 0 ? st.pa : st.pb;
            const auto& other = party == 0 ? st.pb : st.pa;
            for (std::size_t setting = 0; setting < 2; ++setting)
                for (std::size_t l = 0; l < L; ++l) {
                    double coef = 0.0;
                    for (std::size_t z = 0; z < kJoint; ++z) {
                        const std::size_t my_setting = party == 0 ? P.za[z] : P.zb[z];
                        if (my_setting != setting) continue;
                        const std::size_t other_setting = party == 0 ? P.zb[z] : P.za[z];
                        const double sz = form.sign * (static_cast<int>(z) == form.minus_position ? -1.0 : 1.0);
                        coef += sz * st.q[z * L + l] * (2.0 * other[other_setting * L + l] - 1.0);
                    }
                    const double target = coef >= 0.0 ? 1.0 : 0.0;
                    double& v = mine[setting * L + l];
                    if (v != target) {
                        const bool was_endpoint = v == 0.0 || v == 1.0;
                        v = target;
                        // An endpoint flip with zero coefficient is not progress.
                        if (!(was_endpoint && coef == 0.0)) changed = true;
                    }
                }
        }
        if (!changed) break;
    }
}

struct Inner {
    std::vector<double> q;
    double s = 0.0;     // value of the placement (equals chsh only if it is the best placement)
    double bits = 0.0;
};

// Blahut-Arimoto for   min_q  I(lambda; z) - beta * sum_z sum_l q(l|z) g(z,l).
// The tilt factors exp(beta g / p(z)) are fixed, so each sweep is a
// multiply-and-normalize; rows whose weighted mass underflows fall back to
// the log domain.
Inner blahut_arimoto(const Problem& P, const std::vector<double>& g, double beta, const std::vector<double>& r0) {
    const std::size_t L = P.lambdas;
    std::vector<double> tilt(kJoint * L);
    for (std::size_t z = 0; z < kJoint; ++z) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < L; ++l) top = std::max(top, g[z * L + l]);
        for (std::size_t l = 0; l < L; ++l) tilt[z * L + l] = std::exp(beta * (g[z * L + l] - top) / P.pz[z]);
    }

    std::vector<double> r = r0;
    std::vector<double> next(L);
    std::vector<double> q(kJoint * L);
    for (int iter = 0; iter < 3000; ++iter) {
        for (std::size_t z = 0; z < kJoint; ++z) {
            double sum = 0.0;
            for (std::size_t l = 0; l < L; ++l) sum += q[z * L + l] = r[l] * tilt[z * L + l];
            if (sum > 1e-290) {
                for (std::size_t l = 0; l < L; ++l) q[z * L + l] /= sum;
                continue;
            }
            double peak = -std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < L; ++l)
                if (r[l] > 0.0) peak = std::max(peak, std::log(r[l]) + beta * g[z * L + l] / P.pz[z]);
            sum = 0.0;
            for (std::size_t l = 0; l < L; ++l) {
                q[z * L + l] = r[l] > 0.0 ? std::exp(std::log(r[l]) + beta * g[z * L + l] / P.pz[z] - peak) : 0.0;
                sum += q[z * L + l];
            }
            for (std::size_t l = 0; l < L; ++l) q[z * L + l] /= sum;
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t z = 0; z < kJoint; ++z)
            for (std::size_t l = 0; l < L; ++l) next[l] += P.pz[z] * q[z * L + l];
        double change = 0.0;
        for (std::size_t l = 0; l < L; ++l) change = std::max(change, std::abs(next[l] - r[l]));
        std::swap(r, next);
        if (change < 1e-14) break;
    }
    Inner out;
    out.q = std::move(q);
    for (std::size_t z = 0; z < kJoint; ++z)
        for (std::size_t l = 0; l < L; ++l) out.s += out.q[z * L + l] * g[z * L + l];
    out.bits = mi_bits(P, out.q);
    return out;
}

Inner evaluate_q(const Problem& P, const std::vector<double>& g, std::vector<double> q) {
    Inner out;
    const std::size_t L = P.lambdas;
    for (std::size_t z = 0; z < kJoint; ++z)
        for (std::size_t l = 0; l < L; ++l) out.s += q[z * L + l] * g[z * L + l];
    out.bits = mi_bits(P, q);
    out.q = std::move(q);
    return out;
}

// Every setting goes to its best lambda values, split evenly across ties.
Inner hard_assignment(const Problem& P, const std::vector<double>& g) {
    const std::size_t L = P.lambdas;
    std::vector<double> q(kJoint * L, 0.0);
    for (std::size_t z = 0; z < kJoint; ++z) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < L; ++l) top = std::max(top, g[z * L + l]);
        std::size_t ties = 0;
        for (std::size_t l = 0; l < L; ++l) ties += g[z * L + l] >= top - kFeasEps;
        for (std::size_t l = 0; l < L; ++l)
            if (g[z * L + l] >= top - kFeasEps) q[z * L + l] = 1.0 / double(ties);
    }
    return evaluate_q(P, g, std::move(q));
}

// Measurement-independent: every setting sees the single best lambda.
Inner best_shared_lambda(const Problem& P, const std::vector<double>& g) {
    const std::size_t L = P.lambdas;
    std::size_t best = 0;
    double best_total = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < L; ++l) {
        double total = 0.0;
        for (std::size_t z = 0; z < kJoint; ++z) total += g[z * L + l];
        if (total > best_total + kFeasEps) {
            best_total = total;
            best = l;
        }
    }
    std::vector<double> q(kJoint * L, 0.0);
    for (std::size_t z = 0; z < kJoint; ++z) q[z * L + best] = 1.0;
    return evaluate_q(P, g, std::move(q));
}

bool inner_feasible(const Problem& P, const Inner& in) {
    return P.goal == Goal::MinCmd ? in.s >= P.level - kFeasEps : in.bits <= P.level + kBitEps;
}

bool inner_better(const Problem& P, const Inner& a, const Inner& b) {
    const bool fa = inner_feasible(P, a);
    const bool fb = inner_feasible(P, b);
    if (fa != fb) return fa;
    if (P.goal == Goal::MinCmd) {
        if (!fa) return a.s > b.s + kFeasEps;
        return a.bits < b.bits - kFeasEps;
    }
    if (!fa) return a.bits < b.bits - kFeasEps;
    return a.s > b.s + kFeasEps;
}

// Exact optimum of the inner convex problem for fixed responses, up to the
// Blahut-Arimoto stopping rule: bisection on the slope beta.
Inner solve_inner(const Problem& P, const std::vector<double>& g) {
    const std::size_t L = P.lambdas;
    const std::vector<double> uniform(L, 1.0 / double(L));
    const Inner hard = hard_assignment(P, g);
    constexpr double kBetaMax = 1e6;
    constexpr int kBisections = 48;

    if (P.goal == Goal::MinCmd) {
        if (!inner_feasible(P, hard)) return hard;
        double lo = 0.0;
        double hi = 1.0;
        Inner at_hi = blahut_arimoto(P, g, hi, uniform);
        while (!inner_feasible(P, at_hi) && hi < kBetaMax) {
            lo = hi;
            hi *= 4.0;
            at_hi = blahut_arimoto(P, g, hi, uniform);
        }
        if (!inner_feasible(P, at_hi)) return hard;
        Inner best = inner_better(P, hard, at_hi) ? hard : at_hi;
        for (int i = 0; i < kBisections; ++i) {
            const double mid = 0.5 * (lo + hi);
            Inner at_mid = blahut_arimoto(P, g, mid, uniform);
            if (inner_feasible(P, at_mid)) {
                hi = mid;
                if (inner_better(P, at_mid, best)) best = std::move(at_mid);
            } else {
                lo = mid;
            }
        }
        return best;
    }

    Inner best = best_shared_lambda(P, g);
    if (inner_feasible(P, hard) && inner_better(P, hard, best)) best = hard;
    double lo = 0.0;
    double hi = 1.0;
    Inner at_hi = blahut_arimoto(P, g, hi, uniform);
    while (inner_feasible(P, at_hi) && hi < kBetaMax) {
        if (inner_better(P, at_hi, best)) best = at_hi;
        lo = hi;
        hi *= 4.0;
        at_hi = blahut_arimoto(P, g, hi, uniform);
    }
    if (inner_feasible(P, at_hi)) {
        if (inner_better(P, at_hi, best)) best = std::move(at_hi);
        return best;
    }
    for (int i = 0; i < kBisections; ++i) {
        const double mid = 0.5 * (lo + hi);
        Inner at_mid = blahut_arimoto(P, g, mid, uniform);
        if (inner_feasible(P, at_mid)) {
            lo = mid;
            if (inner_better(P, at_mid, best)) best = std::move(at_mid);
        } else {
            hi = mid;
        }
    }
    return best;
}

// Lambda values whose gain columns coincide are interchangeable; keep one of
// each and hand the rest back as free slots.
std::vector<bool> duplicate_slots(const Problem& P, const std::vector<double>& g, const std::vector<double>& q) {
    const std::size_t L = P.lambdas;
    std::vector<bool> free(L, false);
    for (std::size_t l = 0; l < L; ++l) {
        double mass = 0.0;
        for (std::size_t z = 0; z < kJoint; ++z) mass += q[z * L + l];
        if (mass <= 1e-12) free[l] = true;
    }
    for (std::size_t l = 0; l < L; ++l) {
        if (free[l]) continue;
        for (std::size_t m = l + 1; m < L; ++m) {
            if (free[m]) continue;
            bool same = true;
            for (std::size_t z = 0; z < kJoint && same; ++z) same = g[z * L + l] == g[z * L + m];
            if (same) free[m] = true;
        }
    }
    return free;
}

struct Polished {
    State state;
    Scores scores;
};

Polished polish(const Problem& P, const State& incumbent) {
    const std::size_t L = P.lambdas;
    const ChshForm form = chsh_best_form(std::span<const double, 4>(score(P, incumbent).e));

    State st = incumbent;
    round_responses(P, st, form);
    std::vector<double> g = gains(P, st, form);
    Inner best = solve_inner(P, g);
    st.q = best.q;

    // Refill free slots with deterministic strategies whose gain columns are
    // not represented yet, keeping any change that improves the inner optimum.
    for (int round = 0; round < static_cast<int>(L); ++round) {
        const auto free = duplicate_slots(P, g, st.q);
        bool improved = false;
        for (std::size_t slot = 0; slot < L && !improved; ++slot) {
            if (!free[slot]) continue;
            for (unsigned bits = 0; bits < 16 && !improved; ++bits) {
                State trial = st;
                trial.pa[0 * L + slot] = bits & 1u ? 1.0 : 0.0;
                trial.pa[1 * L + slot] = bits & 2u ? 1.0 : 0.0;
                trial.pb[0 * L + slot] = bits & 4u ? 1.0 : 0.0;
                trial.pb[1 * L + slot] = bits & 8u ? 1.0 : 0.0;
                std::vector<double> tg = gains(P, trial, form);
                bool novel = true;
                for (std::size_t l = 0; l < L && novel; ++l) {
                    if (l == slot || free[l]) continue;
                    bool same = true;
                    for (std::size_t z = 0; z < kJoint && same; ++z) same = tg[z * L + l] == tg[z * L + slot];
                    novel = !same;
                }
                if (!novel) continue;
                Inner candidate = solve_inner(P, tg);
                if (inner_better(P, candidate, best)) {
                    best = std::move(candidate);
                    trial.q = best.q;
                    st = std::move(trial);
                    g = std::move(tg);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }

    Polished out{st, score(P, st)};
    return out;
}

// ------------------------------------------------------------- restarts

struct RestartResult {
    State state;
    Scores scores;
};

RestartResult run_restart(const Problem& P, const SearchConfig& cfg, std::size_t index) {
    Rng rng = make_rng(cfg.seed, index);
    State start = random_state(P, rng);
    double weight = cfg.penalty_weight;

    std::optional<RestartResult> best;
    for (std::size_t round = 0; round <= cfg.max_reanneals; ++round) {
        State annealed = anneal(P, start, weight, cfg, rng);
        const Scores raw = score(P, annealed);
        Polished pol = polish(P, annealed);
        RestartResult candidate = better(P, raw, pol.scores, kFeasEps, kBitEps) ? RestartResult{annealed, raw}
                                                                                : RestartResult{pol.state, pol.scores};
        if (!best || better(P, candidate.scores, best->scores, kFeasEps, kBitEps)) best = std::move(candidate);
        if (feasible(P, best->scores, kFeasEps, kBitEps)) break;
        weight *= 2.0;
        start = annealed;
    }
    return std::move(*best);
}

LhvModel to_model(const SearchConfig& cfg, const Problem& P, State st) {
    const std::size_t L = P.lambdas;
    for (std::size_t z = 0; z < kJoint; ++z) normalize_row(std::span<double>(st.q).subspan(z * L, L));
    return LhvModel(cfg.settings, L, std::move(st.q), std::move(st.pa), std::move(st.pb));
}

SearchResult search(const Problem& P, const SearchConfig& cfg) {
    std::vector<std::optional<RestartResult>> results(cfg.restarts);
    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cfg.restarts);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i = next++; i < cfg.restarts; i = next++) {
            try {
                results[i] = run_restart(P, cfg, i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    // Serial reduction in restart order; ties keep the lower index.
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (better(P, results[i]->scores, results[best]->scores, kFeasEps, kBitEps)) best = i;

    LhvModel model = to_model(cfg, P, results[best]->state);
    const double s = chsh_value(predict(model));
    const CmdReport report = cmd(model);

    // The optimizer's own bookkeeping must agree with the public evaluators.
    if (std::abs(s - results[best]->scores.s) > 1e-9 || std::abs(report.raw_bits - results[best]->scores.bits) > 1e-9)
        throw InternalError("search scores disagree with independent re-evaluation");

    Scores verified{results[best]->scores.e, s, report.raw_bits};
    const bool ok = feasible(P, verified, cfg.tolerance_s, cfg.tolerance_cmd);
    return SearchResult{ok ? SearchStatus::Converged : SearchStatus::BudgetExhausted, std::move(model), s, report, best};
}

Problem make_problem(Goal goal, double level, const SearchConfig& cfg) {
    Problem P{goal, level, cfg.lambda_count, {}};
    for (std::size_t z = 0; z < kJoint; ++z) P.pz[z] = cfg.settings.marginal()[z];
    return P;
}

}  // namespace

SearchResult min_cmd_for_chsh(double target_s, const SearchConfig& cfg) {
    cfg.validate();
    if (!(target_s > 2.0))
        throw InvalidInput("target CHSH value must exceed 2; any value up to 2 is reachable with C_MD = 0");
    if (target_s > 4.0) throw InvalidInput("target CHSH value cannot exceed the algebraic maximum 4");
    return search(make_problem(Goal::MinCmd, target_s, cfg), cfg);
}

SearchResult max_chsh_under_budget(double budget_bits, const SearchConfig& cfg) {
    cfg.validate();
    if (!(budget_bits >= 0.0) || !std::isfinite(budget_bits)) throw InvalidInput("budget must be a nonnegative number of bits");
    return search(make_problem(Goal::MaxChsh, budget_bits, cfg), cfg);
}

TradeoffCurve tradeoff_curve(const std::vector<double>& budgets, const SearchConfig& cfg) {
    if (!std::is_sorted(budgets.begin(), budgets.end())) throw InvalidInput("budgets must be sorted ascending");
    TradeoffCurve curve;
    for (double b : budgets) {
        SearchResult r = max_chsh_under_budget(b, cfg);
        curve.points.push_back(TradeoffPoint{b, r.chsh, std::move(r.model), r.cmd});
    }
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        auto& prev = curve.points[i - 1];
        auto& cur = curve.points[i];
        if (cur.best_chsh < prev.best_chsh) {
            cur.best_chsh = prev.best_chsh;
            cur.model = prev.model;
            cur.cmd = prev.cmd;
        }
    }
    return curve;
}

std::vector<SearchResult> min_cmd_curve(const std::vector<double>& targets, const SearchConfig& cfg) {
    if (!std::is_sorted(targets.begin(), targets.end())) throw InvalidInput("targets must be sorted ascending");
    std::vector<SearchResult> out;
    for (double t : targets) out.push_back(min_cmd_for_chsh(t, cfg));
    for (std::size_t i = out.size(); i-- > 1;) {
        if (out[i].status == SearchStatus::Converged && out[i].cmd.raw_bits < out[i - 1].cmd.raw_bits)
            out[i - 1] = out[i];
    }
    return out;
}

}  // namespace mdep
