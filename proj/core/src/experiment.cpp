#include "tbcodes/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "tbcodes/dem.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/frame_sim.hpp"
#include "tbcodes/matching.hpp"
#include "tbcodes/pauli.hpp"
#include "tbcodes/rng.hpp"
#include "tbcodes/schedule.hpp"

namespace tb {

WilsonInterval wilson_interval(size_t successes, size_t trials, double z) {
    require(trials > 0, ErrorKind::validation, "interval needs at least one trial");
    require(successes <= trials, ErrorKind::validation,
            "successes exceed trial count");
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = phat + z2 / (2.0 * n);
    double spread = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    return {(center - spread) / denom, (center + spread) / denom};
}

namespace {

double per_round_rate(double p_fail, size_t rounds) {
    return 1.0 - std::pow(1.0 - p_fail, 1.0 / static_cast<double>(rounds));
}

double per_qubit_rate(double p_round, size_t k) {
    return 1.0 - std::pow(1.0 - p_round, 1.0 / static_cast<double>(k));
}

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general);
    out.append(buf, res.ptr);
}

}  // namespace

MemoryResult run_memory_experiment(const StabilizerCode& code, Basis mem_basis,
                                   size_t rounds, double p, size_t shots,
                                   uint64_t seed, size_t d, int threads) {
    require(rounds >= 1, ErrorKind::validation, "memory experiment needs >= 1 round");
    require(shots >= 1, ErrorKind::validation, "memory experiment needs >= 1 shot");
    LogicalBasis lb = logical_basis(code);
    Circuit circuit = build_memory_circuit(code, lb, rounds, NoiseModel{p}, mem_basis);
    SampleResult samples = sample_circuit(circuit, shots, seed, threads);
    DetectorErrorModel dem = extract_dem(circuit);
    Decoder decoder(dem, circuit);

    size_t failures = 0;
    std::vector<uint32_t> fired;
    for (size_t s = 0; s < shots; ++s) {
        fired.clear();
        for (size_t det = 0; det < samples.num_detectors; ++det)
            if (samples.detector_bit(s, det)) fired.push_back(static_cast<uint32_t>(det));
        DecodeResult prediction = decoder.decode(fired);
        uint64_t actual = 0;
        for (size_t k = 0; k < samples.num_observables; ++k)
            if (samples.observable_bit(s, k)) actual |= uint64_t{1} << k;
        if (prediction.observables != actual) ++failures;
    }

    MemoryResult r;
    r.code = code.name;
    r.n = code.n;
    r.k = code.k;
    r.d = d;
    r.rounds = rounds;
    r.p_phys = p;
    r.shots = shots;
    r.failures = failures;
    r.seed = seed;
    double p_fail = static_cast<double>(failures) / static_cast<double>(shots);
    r.p_k = per_round_rate(p_fail, rounds);
    r.p_l = per_qubit_rate(r.p_k, code.k);
    WilsonInterval ci = wilson_interval(failures, shots);
    r.ci_lo = per_qubit_rate(per_round_rate(ci.lo, rounds), code.k);
    r.ci_hi = per_qubit_rate(per_round_rate(ci.hi, rounds), code.k);
    return r;
}

std::string memory_csv_header() {
    return "code,n,k,d,rounds,p_phys,shots,failures,p_k,p_l,ci_lo,ci_hi,seed";
}

std::string to_csv_row(const MemoryResult& r) {
    std::string out = r.code;
    out += "," + std::to_string(r.n);
    out += "," + std::to_string(r.k);
    out += "," + std::to_string(r.d);
    out += "," + std::to_string(r.rounds);
    out += ",";
    append_double(out, r.p_phys);
    out += "," + std::to_string(r.shots);
    out += "," + std::to_string(r.failures);
    out += ",";
    append_double(out, r.p_k);
    out += ",";
    append_double(out, r.p_l);
    out += ",";
    append_double(out, r.ci_lo);
    out += ",";
    append_double(out, r.ci_hi);
    out += "," + std::to_string(r.seed);
    return out;
}

std::vector<MemoryResult> parse_memory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<MemoryResult> rows;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == memory_csv_header()) continue;
        std::vector<std::string> fields;
        size_t start = 0;
        for (;;) {
            size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        require(fields.size() == 13, ErrorKind::parse,
                "expected 13 CSV fields (line " + std::to_string(lineno) + ")");
        auto num = [&](size_t i, auto& out) {
            const std::string& f = fields[i];
            auto res = std::from_chars(f.data(), f.data() + f.size(), out);
            require(res.ec == std::errc() && res.ptr == f.data() + f.size(),
                    ErrorKind::parse,
                    "bad CSV number '" + f + "' (line " + std::to_string(lineno) + ")");
        };
        MemoryResult r;
        r.code = fields[0];
        num(1, r.n);
        num(2, r.k);
        num(3, r.d);
        num(4, r.rounds);
        num(5, r.p_phys);
        num(6, r.shots);
        num(7, r.failures);
        num(8, r.p_k);
        num(9, r.p_l);
        num(10, r.ci_lo);
        num(11, r.ci_hi);
        num(12, r.seed);
        rows.push_back(std::move(r));
    }
    return rows;
}

RateFit fit_rate_scaling(const std::vector<std::pair<double, double>>& points) {
    require(points.size() >= 2, ErrorKind::validation,
            "power-law fit needs at least two points");
    std::vector<double> xs, ys;
    for (auto [d, rate] : points) {
        require(d > 0.0 && rate > 0.0, ErrorKind::validation,
                "power-law fit needs positive distances and rates");
        xs.push_back(std::log(d));
        ys.push_back(std::log(rate));
    }
    double x_min = *std::min_element(xs.begin(), xs.end());
    double x_max = *std::max_element(xs.begin(), xs.end());
    require(x_max > x_min, ErrorKind::validation,
            "power-law fit needs at least two distinct distances");

    double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxy / sxx;
    double intercept = my - slope * mx;
    RateFit fit;
    fit.beta = -slope;
    fit.alpha = std::exp(intercept);
    for (size_t i = 0; i < xs.size(); ++i) {
        double res = ys[i] - (intercept + slope * xs[i]);
        fit.residual += res * res;
    }
    return fit;
}

std::vector<SearchHit> random_code_search(
    unsigned l, unsigned m, size_t w_a, size_t w_b, unsigned max_power,
    size_t trials, uint64_t seed, const std::function<bool(size_t, size_t)>& target,
    size_t distance_trials) {
    require(l >= 1 && m >= 1, ErrorKind::validation, "torus dimensions must be positive");
    require(w_a >= 1 && w_b >= 1, ErrorKind::validation,
            "polynomials need at least one term");
    require(static_cast<bool>(target), ErrorKind::validation,
            "search needs a target predicate");

    // Key: reduced translation multisets of both polynomials.
    std::map<std::pair<std::vector<ExponentPair>, std::vector<ExponentPair>>, size_t>
        seen;
    std::vector<SearchHit> hits;
    for (size_t t = 0; t < trials; ++t) {
        RngStream rng(seed, t);
        TBCodeSpec spec;
        spec.l = l;
        spec.m = m;
        auto draw_terms = [&](size_t count) {
            std::vector<Monomial> terms;
            for (size_t i = 0; i < count; ++i) {
                auto axis = static_cast<Axis>(rng.next_below(3));
                auto power = static_cast<unsigned>(rng.next_below(max_power + 1));
                terms.push_back({axis, power});
            }
            return terms;
        };
        spec.a_terms = draw_terms(w_a);
        spec.b_terms = draw_terms(w_b);
        try {
            spec.validate();
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::validation) continue;  // duplicate translations
            throw;
        }
        auto canon = [&](const std::vector<Monomial>& terms) {
            std::vector<ExponentPair> pairs;
            for (const Monomial& term : terms) pairs.push_back(spec.canonical(term));
            std::sort(pairs.begin(), pairs.end());
            return pairs;
        };
        auto key = std::make_pair(canon(spec.a_terms), canon(spec.b_terms));
        if (seen.count(key)) continue;
        seen.emplace(key, t);

        StabilizerCode code = build_code(spec);
        if (code.k == 0) continue;
        DistanceEstimate est = estimate_distance(code, distance_trials, mix64(seed) + t);
        if (!target(code.k, est.distance)) continue;
        hits.push_back({spec, code.n, code.k, est.distance, est.exact});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.k != b.k) return a.k > b.k;
        if (a.d != b.d) return a.d > b.d;
        return a.n < b.n;
    });
    return hits;
}

}  // namespace tb
