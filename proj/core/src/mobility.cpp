#include "droplet/mobility.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "droplet/errors.hpp"

namespace droplet {

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    std::vector<double> grid;
    const double decades = std::log10(hi / lo);
    const int count = static_cast<int>(std::lround(decades * per_decade));
    for (int k = 0; k <= count; ++k) {
        grid.push_back(lo * std::pow(10.0, static_cast<double>(k) / per_decade));
    }
    return grid;
}

std::string format_r(double r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// Central difference of g at r with a relative step, compared against dg with
// a tolerance that also absorbs cancellation in g itself.
bool derivative_consistent(const MobilityLaw::Fn& g, const MobilityLaw::Fn& dg, double r) {
    const double h = 1e-4 * r;
    const double fd = (g(r + h) - g(r - h)) / (2.0 * h);
    const double exact = dg(r);
    const double scale = std::abs(exact) + std::abs(g(r)) / r;
    return std::abs(fd - exact) <= 1e-5 * scale;
}

}  // namespace

MobilityLaw::MobilityLaw(Unchecked, std::string name, Fn f, Fn df, Fn d2f)
    : name_(std::move(name)), f_(std::move(f)), df_(std::move(df)), d2f_(std::move(d2f)) {}

MobilityLaw::MobilityLaw(std::string name, Fn f, Fn df, Fn d2f)
    : MobilityLaw(Unchecked{}, std::move(name), std::move(f), std::move(df), std::move(d2f)) {
    for (double r : log_grid(1e-6, 1e3, 4)) {
        if (!(df_(r) > 0.0)) {
            throw InvalidLaw("law " + name_ + ": F'(" + format_r(r) + ") must be positive");
        }
        if (!derivative_consistent(f_, df_, r)) {
            throw InvalidLaw("law " + name_ + ": F' inconsistent with F at r = " + format_r(r));
        }
        if (!derivative_consistent(df_, d2f_, r)) {
            throw InvalidLaw("law " + name_ + ": F'' inconsistent with F' at r = " + format_r(r));
        }
    }
}

MobilityLaw MobilityLaw::unchecked(std::string name, Fn f, Fn df, Fn d2f) {
    return MobilityLaw(Unchecked{}, std::move(name), std::move(f), std::move(df), std::move(d2f));
}

MobilityLaw MobilityLaw::power_minus_one(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw InvalidArgument("power law exponent must exceed 1, got " + format_r(p));
    }
    std::string name = "r^" + format_r(p) + "-1";
    if (p == 2.0) {
        return MobilityLaw(name, [](double r) { return r * r - 1.0; }, [](double r) { return 2.0 * r; },
                           [](double) { return 2.0; });
    }
    if (p == 3.0) {
        return MobilityLaw(name, [](double r) { return r * r * r - 1.0; }, [](double r) { return 3.0 * r * r; },
                           [](double r) { return 6.0 * r; });
    }
    return MobilityLaw(name, [p](double r) { return std::pow(r, p) - 1.0; },
                       [p](double r) { return p * std::pow(r, p - 1.0); },
                       [p](double r) { return p * (p - 1.0) * std::pow(r, p - 2.0); });
}

MobilityLaw MobilityLaw::linear() {
    return MobilityLaw("r", [](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; });
}

MobilityLaw MobilityLaw::from_spec(const std::string& spec) {
    if (spec == "p2") return power_minus_one(2.0);
    if (spec == "p3") return power_minus_one(3.0);
    if (spec == "linear") return linear();
    if (spec.rfind("p:", 0) == 0) {
        const std::string tail = spec.substr(2);
        double p = 0.0;
        const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), p);
        if (ec != std::errc{} || ptr != tail.data() + tail.size()) {
            throw InvalidArgument("law: cannot parse exponent in '" + spec + "'");
        }
        return power_minus_one(p);
    }
    throw InvalidArgument("law: unknown spec '" + spec + "' (expected p2, p3, p:<value> or linear)");
}

LawValues MobilityLaw::eval(double r) const {
    if (!(r > 0.0)) {
        throw OutOfDomain("law " + name_ + " evaluated at r = " + format_r(r) + " (defined for r > 0)");
    }
    return {f_(r), df_(r), d2f_(r)};
}

std::vector<double> default_probes() {
    auto grid = log_grid(1e-6, 1e-1, 4);
    std::reverse(grid.begin(), grid.end());
    return grid;
}

AssumptionReport check_assumption(const MobilityLaw& law, double gamma, std::vector<double> probes) {
    if (!(gamma > 0.0)) {
        throw InvalidArgument("assumption check needs gamma > 0");
    }
    if (probes.empty()) {
        throw InvalidArgument("assumption check needs at least one probe");
    }
    std::sort(probes.begin(), probes.end(), std::greater<>());

    AssumptionReport report;
    report.probes = probes;
    report.inf_ratio = std::numeric_limits<double>::infinity();
    for (double r : probes) {
        const LawValues v = law.eval(r);
        if (!(v.first > 0.0)) {
            throw InvalidLaw("law " + law.name() + ": F'(" + format_r(r) + ") <= 0");
        }
        const double ratio = v.second / v.first;
        report.ratios.push_back(ratio);
        report.inf_ratio = std::min(report.inf_ratio, ratio);
    }

    const double smallest = probes.back();
    bool satisfied = true;
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < probes.size(); ++i) {
        if (probes[i] > 10.0 * smallest * (1.0 + 1e-12)) continue;
        satisfied = satisfied && report.ratios[i] >= gamma && report.ratios[i] >= previous;
        previous = report.ratios[i];
    }
    report.satisfied = satisfied;
    return report;
}

std::optional<double> certified_gamma(const MobilityLaw& law, std::vector<double> probes) {
    std::sort(probes.begin(), probes.end(), std::greater<>());
    const double smallest = probes.back();
    double tail_min = std::numeric_limits<double>::infinity();
    for (double r : probes) {
        if (r > 10.0 * smallest * (1.0 + 1e-12)) continue;
        const LawValues v = law.eval(r);
        if (v.first > 0.0) tail_min = std::min(tail_min, v.second / v.first);
        else return std::nullopt;
    }
    if (!(tail_min > 0.0) || !std::isfinite(tail_min)) return std::nullopt;
    if (!check_assumption(law, tail_min, probes).satisfied) return std::nullopt;
    return tail_min;
}

}  // namespace droplet
