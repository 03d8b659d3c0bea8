#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace droplet {

struct LawValues {
    double value = 0.0;  // F(r)
    double first = 0.0;  // F'(r)
    double second = 0.0; // F''(r)
};

/// Mobility law F mapping the boundary gradient |Du| to the outward normal
/// velocity. Defined on r > 0 only.
///
/// The checked constructor enforces F' > 0 on a log grid over [1e-6, 1e3] and
/// that F, F', F'' agree with central differences of each other there.
class MobilityLaw {
public:
    using Fn = std::function<double(double)>;

    MobilityLaw(std::string name, Fn f, Fn df, Fn d2f);

    // F(r) = r^p - 1, p > 1.
    static MobilityLaw power_minus_one(double p);
    // F(r) = r. Increasing, but F'' = 0 so it never satisfies the small-r assumption.
    static MobilityLaw linear();
    // Parses "p2", "p3", "p:<value>" or "linear".
    static MobilityLaw from_spec(const std::string& spec);
    // Skips the invariant checks. For test hooks such as F = 0.
    static MobilityLaw unchecked(std::string name, Fn f, Fn df, Fn d2f);

    const std::string& name() const { return name_; }

    LawValues eval(double r) const;
    double operator()(double r) const { return eval(r).value; }

private:
    struct Unchecked {};
    MobilityLaw(Unchecked, std::string name, Fn f, Fn df, Fn d2f);

    std::string name_;
    Fn f_;
    Fn df_;
    Fn d2f_;
};

// Log-spaced probe radii for the small-r limit: 1e-1 down to 1e-6, four per decade.
std::vector<double> default_probes();

struct AssumptionReport {
    bool satisfied = false;
    double inf_ratio = 0.0;
    std::vector<double> probes;
    std::vector<double> ratios;  // F''/F' at each probe
};

/// Certificate-style check of lim_{r->0+} F''(r)/F'(r) >= gamma.
///
/// Satisfied iff every probe in the last decade (the probes within a factor 10
/// of the smallest) has ratio >= gamma and the ratio does not decrease as r
/// decreases across that decade. This cannot prove a limit; it only rules out
/// laws whose ratio is visibly below gamma or falling near zero.
/// Throws InvalidLaw if F' <= 0 at any probe.
AssumptionReport check_assumption(const MobilityLaw& law, double gamma, std::vector<double> probes = default_probes());

// Largest gamma the checker would accept: the minimum ratio over the last
// decade, if that is positive and the tail is monotone. std::nullopt otherwise.
std::optional<double> certified_gamma(const MobilityLaw& law, std::vector<double> probes = default_probes());

}  // namespace droplet
