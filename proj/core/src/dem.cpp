#include "tbcodes/dem.hpp"

#include <charconv>
#include <map>
#include <sstream>
#include <utility>

#include "tbcodes/error.hpp"
#include "tbcodes/frame_sim.hpp"

namespace tb {

namespace {

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general);
    out.append(buf, res.ptr);
}

}  // namespace

DetectorErrorModel extract_dem(const Circuit& circuit) {
    require(circuit.num_observables <= 64, ErrorKind::capacity,
            "detector error model supports at most 64 observables");
    std::vector<double> probs;
    std::vector<FaultSite> sites = enumerate_fault_sites(circuit, &probs);
    std::vector<FaultEffect> effects = propagate_faults(circuit, sites);

    DetectorErrorModel dem;
    dem.num_detectors = circuit.num_detectors;
    dem.num_observables = circuit.num_observables;
    std::map<std::pair<std::vector<uint32_t>, uint64_t>, size_t> index;
    for (size_t i = 0; i < sites.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        FaultEffect& eff = effects[i];
        if (eff.detectors.empty() && eff.observables == 0) continue;
        auto key = std::make_pair(std::move(eff.detectors), eff.observables);
        auto [it, fresh] = index.try_emplace(key, dem.mechanisms.size());
        if (fresh) {
            dem.mechanisms.push_back({probs[i], key.first, key.second});
        } else {
            double& p = dem.mechanisms[it->second].p;
            p = p * (1.0 - probs[i]) + probs[i] * (1.0 - p);
        }
    }
    return dem;
}

std::string serialize(const DetectorErrorModel& dem) {
    std::string out;
    out += "# detectors: " + std::to_string(dem.num_detectors) + "\n";
    out += "# observables: " + std::to_string(dem.num_observables) + "\n";
    for (const FaultMechanism& m : dem.mechanisms) {
        out += "error(";
        append_double(out, m.p);
        out += ")";
        for (uint32_t d : m.detectors) out += " D" + std::to_string(d);
        for (size_t k = 0; k < 64; ++k)
            if ((m.observables >> k) & 1) out += " L" + std::to_string(k);
        out += "\n";
    }
    return out;
}

DetectorErrorModel parse_dem(const std::string& text) {
    DetectorErrorModel dem;
    bool saw_detectors = false, saw_observables = false;
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            std::istringstream hs(line.substr(start + 1));
            std::string key;
            size_t value = 0;
            if (hs >> key >> value) {
                if (key == "detectors:") {
                    dem.num_detectors = value;
                    saw_detectors = true;
                } else if (key == "observables:") {
                    dem.num_observables = value;
                    saw_observables = true;
                }
            }
            continue;
        }
        require(line.compare(start, 6, "error(") == 0, ErrorKind::parse,
                "expected error(p) line" + where());
        size_t close = line.find(')', start);
        require(close != std::string::npos, ErrorKind::parse,
                "unterminated error(p)" + where());
        FaultMechanism m;
        const char* first = line.data() + start + 6;
        const char* last = line.data() + close;
        auto res = std::from_chars(first, last, m.p);
        require(res.ec == std::errc() && res.ptr == last && m.p >= 0.0 && m.p <= 1.0,
                ErrorKind::parse, "bad probability" + where());
        std::istringstream ts(line.substr(close + 1));
        std::string tok;
        while (ts >> tok) {
            require(tok.size() >= 2 && (tok[0] == 'D' || tok[0] == 'L'), ErrorKind::parse,
                    "bad target '" + tok + "'" + where());
            size_t v = 0;
            auto tr = std::from_chars(tok.data() + 1, tok.data() + tok.size(), v);
            require(tr.ec == std::errc() && tr.ptr == tok.data() + tok.size(),
                    ErrorKind::parse, "bad target '" + tok + "'" + where());
            if (tok[0] == 'D') {
                m.detectors.push_back(static_cast<uint32_t>(v));
            } else {
                require(v < 64, ErrorKind::parse, "observable index over 63" + where());
                m.observables |= 1ull << v;
            }
        }
        for (size_t i = 0; i + 1 < m.detectors.size(); ++i)
            require(m.detectors[i] < m.detectors[i + 1], ErrorKind::parse,
                    "detector list not strictly ascending" + where());
        dem.mechanisms.push_back(std::move(m));
    }
    require(saw_detectors && saw_observables, ErrorKind::parse,
            "missing detector/observable count headers");
    for (const FaultMechanism& m : dem.mechanisms)
        for (uint32_t d : m.detectors)
            require(d < dem.num_detectors, ErrorKind::parse,
                    "detector index out of range in error line");
    return dem;
}

}  // namespace tb
