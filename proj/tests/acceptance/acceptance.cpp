// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [criterion...]     run all criteria, or only the listed ones
//
// Exit status is 0 only if every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "generators.hpp"
#include "mdep/inequalities.hpp"
#include "mdep/infotheory.hpp"
#include "mdep/lhv.hpp"
#include "mdep/mdsearch.hpp"
#include "mdep/teleport.hpp"
#include "oracles.hpp"

using namespace mdep;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [violated]");
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Outcome mutual_information_golden() {
    Outcome o;
    const double i0 = mutual_information(JointDistribution(2, 2, {0.25, 0.25, 0.25, 0.25}));
    const double i1 = mutual_information(JointDistribution(2, 2, {0.5, 0.0, 0.0, 0.5}));
    const double ip = mutual_information(JointDistribution(2, 2, {0.3252, 0.1748, 0.1748, 0.3252}));
    o.require(i0 == 0.0, "I(fair) = " + fmt("%.12g", i0));
    o.require(std::abs(i1 - 1.0) <= 1e-12, "I(equal) = " + fmt("%.12g", i1));
    o.require(std::abs(ip - 0.0663) <= 5e-4, "I(partial) = " + fmt("%.6f", ip));
    return o;
}

Outcome zero_dependence_bound() {
    Outcome o;
    const SettingSpace s(2, 2);
    const double enumerated = lhv_chsh_max(s);
    o.require(std::abs(enumerated - 2.0) <= 1e-12 && enumerated == oracle::lhv_chsh_max(),
              "16-strategy max = " + fmt("%.12g", enumerated));

    gen::Engine e(2024);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
        const std::size_t L = 1 + std::size_t(n % 8);
        const auto col = gen::simplex(e, L, 0.2);
        std::vector<double> given;
        for (int z = 0; z < 4; ++z) given.insert(given.end(), col.begin(), col.end());
        const LhvModel m(s, L, given, gen::probabilities(e, 2 * L), gen::probabilities(e, 2 * L));
        worst = std::max(worst, chsh_value(predict(m)));
    }
    o.require(worst <= 2.0 + 1e-9, "max over 1e4 random MI models = " + fmt("%.12g", worst));
    return o;
}

Outcome quantum_violation() {
    Outcome o;
    const double s = chsh_value(chsh_quantum(reference_scenario()));
    o.require(std::abs(s - 2.0 * std::numbers::sqrt2) <= 1e-9,
              "S(Alice Z,(Z+X)/sqrt2; Bob (Z+X)/sqrt2,(Z-X)/sqrt2) = " + fmt("%.12f", s) + ", want 2.828427124746");
    const double t = chsh_value(chsh_quantum(tsirelson_scenario()));
    o.notes.push_back("info: Alice Z,X with the same Bob pair gives S = " + fmt("%.12f", t));
    return o;
}

Outcome brans_endpoint() {
    Outcome o;
    const SettingSpace s(2, 2);
    const auto m = brans_construct(CorrelationTable::from_correlators(2, 2, {1, 1, 1, -1}), s);
    const double v = chsh_value(predict(m));
    const auto r = cmd(m);
    o.require(std::abs(v - 4.0) <= 1e-12, "S = " + fmt("%.15g", v));
    o.require(std::abs(r.raw_bits - 2.0) <= 1e-9, "raw_bits = " + fmt("%.12g", r.raw_bits));
    o.require(std::abs(r.normalized - 1.0) <= 1e-9, "normalized = " + fmt("%.12g", r.normalized));
    return o;
}

Outcome hall_threshold() {
    Outcome o;
    using clock = std::chrono::steady_clock;
    SearchConfig cfg;
    cfg.seed = 1;

    auto t0 = clock::now();
    const auto hard = min_cmd_for_chsh(2.05, cfg);
    const double hard_s = std::chrono::duration<double>(clock::now() - t0).count();
    o.require(hard.status == SearchStatus::Converged && hard.chsh >= 2.05 - cfg.tolerance_s &&
                  hard.cmd.raw_bits <= 0.05 && hard_s < 120.0,
              "hard: S = " + fmt("%.6f", hard.chsh) + " at " + fmt("%.6f", hard.cmd.raw_bits) + " bits in " +
                  fmt("%.1f", hard_s) + " s");

    t0 = clock::now();
    const double target = 2.0 * std::numbers::sqrt2 - 1e-3;
    const auto stretch = min_cmd_for_chsh(target, cfg);
    const double stretch_s = std::chrono::duration<double>(clock::now() - t0).count();
    o.require(stretch.status == SearchStatus::Converged && stretch.chsh >= target - cfg.tolerance_s &&
                  stretch.cmd.raw_bits <= 0.07 && stretch_s < 600.0,
              "stretch: S = " + fmt("%.6f", stretch.chsh) + " at " + fmt("%.6f", stretch.cmd.raw_bits) +
                  " bits in " + fmt("%.1f", stretch_s) + " s");
    return o;
}

Outcome teleportation() {
    Outcome o;
    gen::Engine e(6);
    double worst = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const auto [a, b] = gen::qubit(e);
        for (int k = 0; k < 4; ++k)
            worst = std::max(worst, std::abs(run_teleportation(TeleportInput(a, b), k, 0).fidelity - 1.0));
    }
    o.require(worst <= 1e-12, "max |F - 1| over 4000 forced runs = " + fmt("%.3g", worst));

    const TeleportInput in(0.6, 0.8);
    std::array<int, 4> counts{};
    const int trials = 100000;
    for (int t = 0; t < trials; ++t)
        ++counts[static_cast<std::size_t>(run_teleportation(in, std::nullopt, std::uint64_t(t)).outcome_index)];
    double dev = 0.0;
    for (int c : counts) dev = std::max(dev, std::abs(double(c) / trials - 0.25));
    o.require(dev <= 0.01, "max |freq - 0.25| over 1e5 trials = " + fmt("%.5f", dev));
    return o;
}

Outcome kcbs() {
    Outcome o;
    const double c = kcbs_classical_min();
    o.require(c == -3.0, "classical min = " + fmt("%.12g", c));
    const double q = kcbs_value(pentagram_scenario());
    o.require(std::abs(q - (5.0 - 4.0 * std::sqrt(5.0))) <= 1e-9, "pentagram = " + fmt("%.12f", q));
    return o;
}

Outcome tradeoff_shape() {
    Outcome o;
    SearchConfig cfg;
    const auto curve = tradeoff_curve({0.0, 0.0663, 0.5, 1.0, 2.0}, cfg);
    bool monotone = true;
    std::string values;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (i && curve.points[i].best_chsh < curve.points[i - 1].best_chsh) monotone = false;
        values += (i ? "," : "") + fmt("%.4f", curve.points[i].best_chsh);
    }
    o.require(monotone, "S = [" + values + "] monotone");
    o.require(std::abs(curve.points.front().best_chsh - 2.0) <= 1e-3, "S(0) within 1e-3 of 2");
    o.require(std::abs(curve.points.back().best_chsh - 4.0) <= 1e-3, "S(2) within 1e-3 of 4");
    return o;
}

struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {1, "mutual-information golden values", 1.0, mutual_information_golden},
        {2, "zero-dependence CHSH bound", 5.0, zero_dependence_bound},
        {3, "quantum violation", 1.0, quantum_violation},
        {4, "Brans endpoint", 1.0, brans_endpoint},
        {5, "Hall threshold", 720.0, hall_threshold},
        {6, "teleportation", 10.0, teleportation},
        {7, "KCBS", 1.0, kcbs},
        {8, "tradeoff-curve shape", 900.0, tradeoff_shape},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : all) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.limit_seconds;
        const bool ok = o.pass && in_time;
        failures += ok ? 0 : 1;
        std::printf("%s  [%d] %s: %s (%.2f s, limit %.0f s%s)\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    o.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", exceeded");
        for (const auto& n : o.notes) std::printf("      %s\n", n.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
