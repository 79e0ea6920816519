#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tbcodes/circuit.hpp"
#include "tbcodes/clifford.hpp"
#include "tbcodes/code.hpp"
#include "tbcodes/dem.hpp"
#include "tbcodes/error.hpp"
#include "tbcodes/experiment.hpp"
#include "tbcodes/frame_sim.hpp"
#include "tbcodes/matching.hpp"
#include "tbcodes/pauli.hpp"
#include "tbcodes/schedule.hpp"

namespace {

using json = nlohmann::ordered_json;

int exit_code_for(tb::ErrorKind kind) {
    switch (kind) {
        case tb::ErrorKind::validation:
        case tb::ErrorKind::parse:
        case tb::ErrorKind::io:
        case tb::ErrorKind::scheduling:
        case tb::ErrorKind::shape:
            return 1;
        default:
            return 2;
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    tb::require(in.good(), tb::ErrorKind::io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    tb::require(in.good(), tb::ErrorKind::io, "cannot open " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

void write_file(const std::string& path, const char* data, size_t size) {
    std::ofstream out(path, std::ios::binary);
    tb::require(out.good(), tb::ErrorKind::io, "cannot open " + path + " for writing");
    out.write(data, static_cast<std::streamsize>(size));
    out.flush();
    tb::require(out.good(), tb::ErrorKind::io, "write to " + path + " failed");
}

void write_file(const std::string& path, const std::string& text) {
    write_file(path, text.data(), text.size());
}

struct Options {
    std::string spec_path;
    std::string code_name;
    std::string circuit_path;
    std::string gates_path;
    std::string claim;
    std::string csv_path;
    std::string shots_path;
    std::string out_path;
    std::string dem_path;
    std::string basis = "z";
    double p = 0.0;
    uint64_t shots = 0;
    uint64_t rounds = 0;
    uint64_t trials = 1000;
    uint64_t distance_trials = 200;
    uint64_t seed = 0;
    int threads = 1;
    uint64_t d_override = 0;
    bool print_stabilizers = false;
    bool as_json = false;
    bool dump_graph = false;
    unsigned l = 0;
    unsigned m = 0;
    uint64_t w_a = 2;
    uint64_t w_b = 2;
    unsigned max_power = 0;
    uint64_t target_k = 1;
    uint64_t target_d = 1;
    uint64_t top = 20;
};

tb::StabilizerCode load_code(const Options& o) {
    tb::require(o.spec_path.empty() != o.code_name.empty(), tb::ErrorKind::validation,
                "exactly one of --spec or --code is required");
    if (!o.code_name.empty()) return tb::build_named_code(o.code_name);
    return tb::build_code(tb::TBCodeSpec::from_json_file(o.spec_path));
}

tb::Basis parse_basis(const std::string& s) {
    if (s == "z") return tb::Basis::z;
    if (s == "x") return tb::Basis::x;
    tb::fail(tb::ErrorKind::validation, "basis must be x or z, got " + s);
}

std::string pauli_factors(const tb::PauliOp& p) {
    std::string s;
    for (size_t q = 0; q < p.n; ++q) {
        bool x = p.x_bit(q), z = p.z_bit(q);
        if (!x && !z) continue;
        if (!s.empty()) s += ' ';
        s += (x && z) ? 'Y' : (x ? 'X' : 'Z');
        s += std::to_string(q + 1);
    }
    return s.empty() ? std::string("I") : s;
}

std::string row_support_pauli(const tb::BitMatrix& h, size_t r, char pauli) {
    std::string s;
    for (size_t c = 0; c < h.cols(); ++c) {
        if (!h.get(r, c)) continue;
        if (!s.empty()) s += ' ';
        s += pauli;
        s += std::to_string(c + 1);
    }
    return s;
}

std::string bitrow_string(const tb::BitMatrix& h, size_t r) {
    std::string s(h.cols(), '0');
    for (size_t c = 0; c < h.cols(); ++c)
        if (h.get(r, c)) s[c] = '1';
    return s;
}

std::string format_poly(const std::vector<tb::Monomial>& terms) {
    std::string s;
    for (const auto& t : terms) {
        if (!s.empty()) s += '+';
        if (t.power == 0) {
            s += '1';
        } else {
            s += tb::to_string(t.axis);
            if (t.power > 1) s += '^' + std::to_string(t.power);
        }
    }
    return s;
}

int cmd_construct(const Options& o) {
    auto code = load_code(o);
    if (o.as_json) {
        json j;
        j["name"] = code.name;
        j["n"] = code.n;
        j["k"] = code.k;
        j["z_checks"] = code.h_z.rows();
        j["x_checks"] = code.h_x.rows();
        json hz = json::array(), hx = json::array();
        for (size_t r = 0; r < code.h_z.rows(); ++r) hz.push_back(bitrow_string(code.h_z, r));
        for (size_t r = 0; r < code.h_x.rows(); ++r) hx.push_back(bitrow_string(code.h_x, r));
        j["h_z"] = hz;
        j["h_x"] = hx;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "code=" << code.name << " n=" << code.n << " k=" << code.k
              << " z_checks=" << code.h_z.rows() << " x_checks=" << code.h_x.rows() << "\n";
    if (o.print_stabilizers) {
        for (size_t r = 0; r < code.h_z.rows(); ++r)
            std::cout << "S_Z" << r + 1 << " = " << row_support_pauli(code.h_z, r, 'Z') << "\n";
        for (size_t r = 0; r < code.h_x.rows(); ++r)
            std::cout << "S_X" << r + 1 << " = " << row_support_pauli(code.h_x, r, 'X') << "\n";
    }
    return 0;
}

int cmd_distance(const Options& o) {
    auto code = load_code(o);
    auto est = tb::estimate_distance(code, o.trials, o.seed);
    if (o.as_json) {
        json j;
        j["d"] = est.distance;
        j["exact"] = est.exact;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "d=" << est.distance << " exact=" << (est.exact ? "true" : "false") << "\n";
    }
    return 0;
}

int cmd_logicals(const Options& o) {
    auto code = load_code(o);
    auto lb = tb::logical_basis(code);
    if (o.as_json) {
        json j;
        j["k"] = lb.size();
        json pairs = json::array();
        for (const auto& [x, z] : lb.pairs) {
            json p;
            p["x"] = pauli_factors(x);
            p["z"] = pauli_factors(z);
            pairs.push_back(p);
        }
        j["pairs"] = pairs;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    for (size_t i = 0; i < lb.size(); ++i) {
        std::cout << "X_L" << i + 1 << " = " << pauli_factors(lb.pairs[i].first) << "\n";
        std::cout << "Z_L" << i + 1 << " = " << pauli_factors(lb.pairs[i].second) << "\n";
    }
    return 0;
}

int cmd_circuit(const Options& o) {
    auto code = load_code(o);
    tb::require(o.rounds >= 1, tb::ErrorKind::validation, "--rounds must be at least 1");
    auto lb = tb::logical_basis(code);
    auto c = tb::build_memory_circuit(code, lb, o.rounds, tb::NoiseModel{o.p},
                                      parse_basis(o.basis));
    auto text = tb::serialize(c);
    if (o.out_path.empty()) {
        std::cout << text;
    } else {
        write_file(o.out_path, text);
        std::cout << "qubits=" << c.num_qubits << " measurements=" << c.num_measurements
                  << " detectors=" << c.num_detectors << " observables=" << c.num_observables
                  << "\n";
    }
    return 0;
}

int cmd_sample(const Options& o) {
    auto c = tb::parse_circuit(read_text_file(o.circuit_path));
    tb::require(o.shots >= 1, tb::ErrorKind::validation, "--shots must be at least 1");
    tb::require(!o.out_path.empty(), tb::ErrorKind::validation, "--out is required");
    auto res = tb::sample_circuit(c, o.shots, o.seed, o.threads);
    if (!o.dem_path.empty()) write_file(o.dem_path, tb::serialize(tb::extract_dem(c)));
    auto bytes = res.pack_b8();
    write_file(o.out_path, reinterpret_cast<const char*>(bytes.data()), bytes.size());
    std::cout << "shots=" << res.shots << " detectors=" << res.num_detectors
              << " observables=" << res.num_observables << " bytes=" << bytes.size() << "\n";
    return 0;
}

void dump_graph(std::ostream& out, const tb::MatchingGraph& g) {
    out << "c basis=" << tb::to_string(g.basis) << " nodes=" << g.num_nodes()
        << " edges=" << g.edges.size() << "\n";
    out << "p edge " << g.num_nodes() << " " << g.edges.size() << "\n";
    for (const auto& e : g.edges) {
        out << "e " << e.u << " " << e.v << " " << std::setprecision(10) << e.weight
            << " p=" << e.p << " obs=" << e.observables << "\n";
    }
}

int cmd_decode(const Options& o) {
    auto c = tb::parse_circuit(read_text_file(o.circuit_path));
    auto bytes = read_binary_file(o.shots_path);
    size_t bps = (c.num_detectors + c.num_observables + 7) / 8;
    tb::require(bps > 0, tb::ErrorKind::validation, "circuit has no detectors or observables");
    tb::require(bytes.size() % bps == 0, tb::ErrorKind::io,
                "shot file size " + std::to_string(bytes.size()) +
                    " is not a multiple of the per-shot byte count " + std::to_string(bps));
    size_t shots = bytes.size() / bps;
    auto res = tb::unpack_b8(bytes, shots, c.num_detectors, c.num_observables);
    auto dem = tb::extract_dem(c);
    tb::Decoder dec(dem, c);
    if (o.dump_graph) {
        dump_graph(std::cout, dec.graph(tb::Basis::z));
        dump_graph(std::cout, dec.graph(tb::Basis::x));
    }
    size_t failures = 0;
    std::vector<uint32_t> fired;
    for (size_t s = 0; s < shots; ++s) {
        fired.clear();
        for (size_t d = 0; d < c.num_detectors; ++d)
            if (res.detector_bit(s, d)) fired.push_back(static_cast<uint32_t>(d));
        uint64_t actual = 0;
        for (size_t k = 0; k < c.num_observables; ++k)
            if (res.observable_bit(s, k)) actual |= uint64_t{1} << k;
        if (dec.decode(fired).observables != actual) ++failures;
    }
    std::ostringstream csv;
    csv << "shots,failures,failure_rate\n";
    csv << shots << "," << failures << ","
        << std::setprecision(10) << (shots ? double(failures) / double(shots) : 0.0) << "\n";
    if (o.out_path.empty()) {
        std::cout << csv.str();
    } else {
        write_file(o.out_path, csv.str());
        std::cout << "shots=" << shots << " failures=" << failures << "\n";
    }
    return 0;
}

size_t known_distance(const tb::StabilizerCode& code, const Options& o) {
    if (o.d_override) return o.d_override;
    if (code.surface_distance) return *code.surface_distance;
    if (code.name == "tb12" || code.name == "tb24") return 3;
    if (code.name == "tb56") return 5;
    // Exhaustive low-weight search: the l=4, m=11 code has weight-6 logicals.
    if (code.name == "tb88") return 6;
    return tb::estimate_distance(code, o.distance_trials ? o.distance_trials : 200, o.seed)
        .distance;
}

int cmd_memory(const Options& o) {
    auto code = load_code(o);
    tb::require(o.shots >= 1, tb::ErrorKind::validation, "--shots must be at least 1");
    size_t d = known_distance(code, o);
    size_t rounds = o.rounds ? o.rounds : d;
    auto res = tb::run_memory_experiment(code, parse_basis(o.basis), rounds, o.p, o.shots,
                                         o.seed, d, o.threads);
    if (o.as_json) {
        json j;
        j["code"] = res.code;
        j["n"] = res.n;
        j["k"] = res.k;
        j["d"] = res.d;
        j["rounds"] = res.rounds;
        j["p_phys"] = res.p_phys;
        j["shots"] = res.shots;
        j["failures"] = res.failures;
        j["p_k"] = res.p_k;
        j["p_l"] = res.p_l;
        j["ci_lo"] = res.ci_lo;
        j["ci_hi"] = res.ci_hi;
        j["seed"] = res.seed;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::string text = tb::memory_csv_header() + "\n" + tb::to_csv_row(res) + "\n";
    std::cout << text;
    if (!o.out_path.empty()) write_file(o.out_path, text);
    return 0;
}

int cmd_search(const Options& o) {
    tb::require(o.l >= 1 && o.m >= 1, tb::ErrorKind::validation, "--l and --m are required");
    unsigned max_power = o.max_power ? o.max_power : o.l * o.m;
    auto target = [&](size_t k, size_t d) { return k >= o.target_k && d >= o.target_d; };
    auto hits = tb::random_code_search(o.l, o.m, o.w_a, o.w_b, max_power, o.trials, o.seed,
                                       target, o.distance_trials);
    std::cout << "l,m,a,b,n,k,d,d_exact\n";
    size_t shown = 0;
    for (const auto& h : hits) {
        if (shown++ >= o.top) break;
        std::cout << h.spec.l << "," << h.spec.m << "," << format_poly(h.spec.a_terms) << ","
                  << format_poly(h.spec.b_terms) << "," << h.n << "," << h.k << "," << h.d
                  << "," << (h.d_exact ? "true" : "false") << "\n";
    }
    return 0;
}

int cmd_fit(const Options& o) {
    auto rows = tb::parse_memory_csv(read_text_file(o.csv_path));
    tb::require(!rows.empty(), tb::ErrorKind::validation, "no data rows in " + o.csv_path);
    std::map<std::string, std::pair<double, double>> by_code;
    for (const auto& r : rows) {
        tb::require(r.n > 0, tb::ErrorKind::validation, "row with n=0 in " + o.csv_path);
        by_code[r.code] = {double(r.d), double(r.k) / double(r.n)};
    }
    std::vector<std::pair<double, double>> points;
    for (const auto& [name, pt] : by_code) points.push_back(pt);
    auto fit = tb::fit_rate_scaling(points);
    if (o.as_json) {
        json j;
        j["alpha"] = fit.alpha;
        j["beta"] = fit.beta;
        j["residual"] = fit.residual;
        j["points"] = points.size();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << std::setprecision(6) << "alpha=" << fit.alpha << " beta=" << fit.beta
                  << " residual=" << fit.residual << " points=" << points.size() << "\n";
    }
    return 0;
}

std::string induced_row_string(const tb::GateReport& rep, size_t i) {
    static const char* const label[2] = {"X_L", "Z_L"};
    std::string s = rep.logical_signs[i] < 0 ? "-" : "";
    bool any = false;
    for (size_t j = 0; j < rep.induced.cols(); ++j) {
        if (!rep.induced.get(i, j)) continue;
        if (any) s += ' ';
        s += label[j % 2] + std::to_string(j / 2 + 1);
        any = true;
    }
    if (!any) s += 'I';
    return s;
}

int cmd_verify_gate(const Options& o) {
    auto code = load_code(o);
    auto lb = tb::logical_basis(code);
    auto seq = tb::parse_gate_sequence_file(o.gates_path);
    auto claim = tb::parse_gate_claim(o.claim);
    auto rep = tb::verify_logical_gate(code, lb, seq, claim);
    if (o.as_json) {
        json j;
        j["preserves_stabilizers"] = rep.preserves_stabilizers;
        j["matches_claim"] = rep.matches_claim;
        j["ok"] = rep.ok();
        json rows = json::array();
        for (size_t i = 0; i < rep.induced.rows(); ++i) rows.push_back(induced_row_string(rep, i));
        j["induced"] = rows;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    static const char* const label[2] = {"X_L", "Z_L"};
    for (size_t i = 0; i < rep.induced.rows(); ++i) {
        std::cout << label[i % 2] << i / 2 + 1 << " -> " << induced_row_string(rep, i) << "\n";
    }
    std::cout << "preserves_stabilizers=" << (rep.preserves_stabilizers ? "true" : "false")
              << "\n";
    std::cout << "matches_claim=" << (rep.matches_claim ? "true" : "false") << "\n";
    std::cout << "ok=" << (rep.ok() ? "true" : "false") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trivariate bicycle code toolkit"};
    app.require_subcommand(1);
    Options o;
    int (*run)(const Options&) = nullptr;

    auto add_code_source = [&o](CLI::App* cmd) {
        cmd->add_option("--spec", o.spec_path, "code spec JSON file");
        cmd->add_option("--code", o.code_name,
                        "built-in code name (tb12, tb24, tb56, tb88, surface3, surface5, ...)");
    };

    auto* construct = app.add_subcommand("construct", "build a code and print its parameters");
    add_code_source(construct);
    construct->add_flag("--print-stabilizers", o.print_stabilizers,
                        "print the stabilizer generators");
    construct->add_flag("--json", o.as_json, "JSON output");
    construct->callback([&] { run = cmd_construct; });

    auto* distance = app.add_subcommand("distance", "compute or bound the code distance");
    add_code_source(distance);
    distance->add_option("--trials", o.trials, "information-set trials when not exhaustive");
    distance->add_option("--seed", o.seed, "RNG seed");
    distance->add_flag("--json", o.as_json, "JSON output");
    distance->callback([&] { run = cmd_distance; });

    auto* logicals = app.add_subcommand("logicals", "print a symplectic logical operator basis");
    add_code_source(logicals);
    logicals->add_flag("--json", o.as_json, "JSON output");
    logicals->callback([&] { run = cmd_logicals; });

    auto* circuit = app.add_subcommand("circuit", "emit a noisy memory circuit");
    add_code_source(circuit);
    circuit->add_option("--rounds", o.rounds, "syndrome extraction rounds")->required();
    circuit->add_option("--p", o.p, "physical error probability");
    circuit->add_option("--basis", o.basis, "memory basis (x or z)");
    circuit->add_option("--out", o.out_path, "output file (default stdout)");
    circuit->callback([&] { run = cmd_circuit; });

    auto* sample = app.add_subcommand("sample", "sample detector/observable shots");
    sample->add_option("--circuit", o.circuit_path, "circuit file")->required();
    sample->add_option("--shots", o.shots, "number of shots")->required();
    sample->add_option("--seed", o.seed, "RNG seed");
    sample->add_option("--threads", o.threads, "worker threads");
    sample->add_option("--out", o.out_path, "packed shot output (.b8)")->required();
    sample->add_option("--dem", o.dem_path, "also write the detector error model here");
    sample->callback([&] { run = cmd_sample; });

    auto* decode = app.add_subcommand("decode", "decode sampled shots and count failures");
    decode->add_option("--circuit", o.circuit_path, "circuit file")->required();
    decode->add_option("--shots", o.shots_path, "packed shot file (.b8)")->required();
    decode->add_option("--out", o.out_path, "failure CSV output (default stdout)");
    decode->add_flag("--dump-graph", o.dump_graph, "dump both matching graphs");
    decode->callback([&] { run = cmd_decode; });

    auto* memory = app.add_subcommand("memory", "run a full memory experiment");
    add_code_source(memory);
    memory->add_option("--p", o.p, "physical error probability")->required();
    memory->add_option("--shots", o.shots, "number of shots")->required();
    memory->add_option("--seed", o.seed, "RNG seed");
    memory->add_option("--rounds", o.rounds, "rounds (default: code distance)");
    memory->add_option("--basis", o.basis, "memory basis (x or z)");
    memory->add_option("--d", o.d_override, "record this distance instead of estimating");
    memory->add_option("--threads", o.threads, "worker threads");
    memory->add_option("--out", o.out_path, "also write the CSV here");
    memory->add_flag("--json", o.as_json, "JSON output");
    memory->callback([&] { run = cmd_memory; });

    auto* search = app.add_subcommand("search", "random search for good check polynomials");
    search->add_option("--l", o.l, "first torus dimension")->required();
    search->add_option("--m", o.m, "second torus dimension")->required();
    search->add_option("--wa", o.w_a, "terms in polynomial A");
    search->add_option("--wb", o.w_b, "terms in polynomial B");
    search->add_option("--max-power", o.max_power, "largest monomial power (default l*m)");
    search->add_option("--trials", o.trials, "random candidates to draw");
    search->add_option("--seed", o.seed, "RNG seed");
    search->add_option("--target-k", o.target_k, "minimum logical qubit count");
    search->add_option("--target-d", o.target_d, "minimum distance estimate");
    search->add_option("--distance-trials", o.distance_trials, "trials per distance estimate");
    search->add_option("--top", o.top, "rows to print");
    search->callback([&] { run = cmd_search; });

    auto* fit = app.add_subcommand("fit", "fit the rate scaling R = alpha * d^-beta");
    fit->add_option("--csv", o.csv_path, "memory experiment CSV")->required();
    fit->add_flag("--json", o.as_json, "JSON output");
    fit->callback([&] { run = cmd_fit; });

    auto* verify = app.add_subcommand("verify-gate", "check a physical Clifford sequence "
                                                     "against a claimed logical gate");
    add_code_source(verify);
    verify->add_option("--gates", o.gates_path, "gate sequence file")->required();
    verify->add_option("--claim", o.claim, "claimed gate (H:1, S:2, CNOT:1:2)")->required();
    verify->add_flag("--json", o.as_json, "JSON output");
    verify->callback([&] { run = cmd_verify_gate; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return run(o);
    } catch (const tb::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
}
