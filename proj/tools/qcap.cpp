// qcap: file-driven command line interface for one-shot and asymptotic
// channel capacity bounds.
//
// Exit codes: 0 success, 2 input error, 3 solver failure, 4 internal error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qcap/asymptotic.hpp"
#include "qcap/bounds.hpp"
#include "qcap/decoupling.hpp"
#include "qcap/linalg.hpp"
#include "qcap/random.hpp"

using nlohmann::json;
using namespace qcap;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// deterministic formatting: 9 significant digits, sorted keys

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

json jnum(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    // round-trip through the fixed formatting so repeated runs emit
    // byte-identical text
    return json::parse(fmt_double(v), nullptr, true);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void emit_report(const std::string& command_echo, const json& config, const json& results,
                 const std::string& out_path, double wall_seconds) {
    json report;
    report["command"] = command_echo;
    report["config"] = config;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(config.dump())));
    report["config_hash"] = hash;
    report["results"] = results;
    const std::string text = report.dump(2) + "\n";
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw InputError("cannot write output file: " + out_path);
        f << text;
    } else {
        std::cout << text;
    }
    // wall time goes to stderr so identical runs stay byte-identical on
    // stdout and in files
    std::fprintf(stderr, "wall_time_s %.3f\n", wall_seconds);
}

// ---------------------------------------------------------------------------
// spec files

MatrixXcd parse_complex_matrix(const json& rows, int expect_rows, int expect_cols,
                               const std::string& what) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != expect_rows)
        throw InputError(what + ": expected " + std::to_string(expect_rows) + " rows");
    MatrixXcd m(expect_rows, expect_cols);
    for (int r = 0; r < expect_rows; ++r) {
        const auto& row = rows[r];
        if (!row.is_array() || static_cast<int>(row.size()) != expect_cols)
            throw InputError(what + ": row " + std::to_string(r) + " needs " +
                             std::to_string(expect_cols) + " entries");
        for (int c = 0; c < expect_cols; ++c) {
            const auto& cell = row[c];
            if (!cell.is_array() || cell.size() != 2)
                throw InputError(what + ": entries are [re, im] pairs (row " +
                                 std::to_string(r) + ", col " + std::to_string(c) + ")");
            m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return m;
}

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open file: " + path);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw InputError(path + ": " + std::string(e.what()));
    }
    return j;
}

ChannelRep parse_channel(const json& j, const std::string& path) {
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw InputError(path + ": channel spec version must be 1");
    const std::string kind = j.value("kind", "");
    if (kind == "standard") {
        if (!j.contains("name") || !j.contains("param"))
            throw InputError(path + ": standard channels need fields 'name' and 'param'");
        try {
            return standard_channel(j["name"].get<std::string>(), j["param"].get<double>());
        } catch (const std::invalid_argument& e) {
            throw InputError(path + ": " + std::string(e.what()));
        }
    }
    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 2)
        throw InputError(path + ": field 'dims' = [d_in, d_out] is required");
    const int din = j["dims"][0].get<int>();
    const int dout = j["dims"][1].get<int>();
    if (din < 1 || dout < 1) throw InputError(path + ": dimensions must be positive");
    SystemLayout in = SystemLayout::single("A", din);
    SystemLayout out = SystemLayout::single("B", dout);
    try {
        if (kind == "kraus") {
            std::vector<MatrixXcd> ks;
            for (const auto& kj : j.at("data"))
                ks.push_back(parse_complex_matrix(kj, dout, din, path + ": Kraus operator"));
            return ChannelRep::from_kraus(std::move(ks), in, out);
        }
        if (kind == "choi") {
            MatrixXcd m = parse_complex_matrix(j.at("data"), din * dout, din * dout,
                                               path + ": Choi matrix");
            auto state = DensityOperator(m, in.tensor_with(out), Normalization::Normalized);
            return ChannelRep::from_choi(state, in, out);
        }
        if (kind == "stinespring") {
            const int env = j.value("env_dim", 0);
            if (env < 1) throw InputError(path + ": stinespring spec needs 'env_dim'");
            MatrixXcd m = parse_complex_matrix(j.at("data"), dout * env, din,
                                               path + ": Stinespring operator");
            return ChannelRep::from_stinespring(std::move(m), in, out, env);
        }
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path + ": " + std::string(e.what()));
    }
    throw InputError(path + ": unknown channel kind '" + kind + "'");
}

DensityOperator parse_state(const json& j, const std::string& path) {
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw InputError(path + ": state spec version must be 1");
    if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
        throw InputError(path + ": field 'factors' = [{label, dim}, ...] is required");
    std::vector<Factor> fs;
    for (const auto& fj : j["factors"]) {
        if (!fj.contains("label") || !fj.contains("dim"))
            throw InputError(path + ": every factor needs 'label' and 'dim'");
        fs.push_back({fj["label"].get<std::string>(), fj["dim"].get<int>()});
    }
    try {
        SystemLayout lay(fs);
        MatrixXcd m =
            parse_complex_matrix(j.at("data"), lay.dim(), lay.dim(), path + ": state matrix");
        const bool subnorm = j.value("subnormalized", false);
        return DensityOperator(m, lay,
                               subnorm ? Normalization::Subnormalized : Normalization::Normalized);
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path + ": " + std::string(e.what()));
    }
}

std::vector<std::string> split_labels(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

json entropy_json(const SmoothEntropyResult& r) {
    json j;
    j["value_bits"] = jnum(r.value);
    j["epsilon"] = jnum(r.epsilon);
    j["status"] = r.status == EntropyStatus::Optimal
                      ? "optimal"
                      : (r.status == EntropyStatus::NearOptimal ? "near-optimal" : "infeasible");
    j["duality_gap"] = jnum(r.duality_gap);
    return j;
}

// ---------------------------------------------------------------------------
// commands

int cmd_entropy(const std::string& state_path, const std::string& which,
                const std::string& target_csv, double eps, const std::string& out_path,
                const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    auto rho = parse_state(load_json(state_path), state_path);
    auto target = split_labels(target_csv);
    if (target.empty()) throw InputError("entropy requires --target labels");
    if (eps < 0 || eps >= 1) throw InputError("epsilon must lie in [0,1)");
    for (const auto& t : target)
        if (!rho.layout().has_label(t)) throw InputError("unknown target label '" + t + "'");

    json results;
    results["which"] = which;
    if (which == "vn") {
        results["value_bits"] = jnum(von_neumann_cond(rho, target));
    } else {
        SmoothEntropyResult r;
        if (which == "hmin")
            r = hmin(rho, target);
        else if (which == "hmax")
            r = hmax(rho, target);
        else if (which == "hmin_smooth")
            r = hmin_smooth(rho, target, eps);
        else if (which == "hmax_smooth")
            r = hmax_smooth(rho, target, eps);
        else
            throw InputError("unknown entropy kind '" + which + "'");
        if (r.status == EntropyStatus::Infeasible) throw SolverError("entropy solve failed");
        json ej = entropy_json(r);
        for (auto& [k, v] : ej.items()) results[k] = v;
    }

    json config{{"state", state_path}, {"which", which}, {"target", target_csv}, {"eps", jnum(eps)}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(echo, config, results, out_path, wall);
    return 0;
}

int cmd_bound(const std::string& channel_path, const std::string& state_path,
              const std::string& mode, double c, double q, double e, double delta, double eps,
              double delta1, double delta2, double dprime, double iota,
              const std::string& out_path, const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    auto channel = parse_channel(load_json(channel_path), channel_path);
    auto rho = parse_state(load_json(state_path), state_path);
    InputEnsemble ens = [&]() {
        try {
            return InputEnsemble::make(rho, true);
        } catch (const std::invalid_argument& ex) {
            throw InputError(std::string("ensemble: ") + ex.what());
        }
    }();

    json results;
    try {
        if (mode == "direct") {
            SmoothingBudget b;
            b.epsilon = eps;
            b.delta1 = delta1;
            b.delta2 = delta2;
            auto r = direct_feasible(ens, channel, CodeParams(c, q, e, delta), b);
            results["feasible"] = r.feasible;
            results["achieved_error"] = jnum(r.achieved_error);
            results["slack_dim"] = jnum(r.slack_dim);
            results["slack_joint"] = jnum(r.slack_joint);
            results["slack_quantum"] = jnum(r.slack_quantum);
        } else if (mode == "converse") {
            auto r = converse_holds(ens, channel, CodeParams(c, q, e, delta), iota);
            results["holds"] = r.holds;
            results["lambda"] = jnum(r.lambda);
            results["lambda_prime"] = jnum(r.lambda_prime);
            results["saturated"] = r.saturated;
            results["slack_dim"] = jnum(r.slack_dim);
            results["slack_joint"] = jnum(r.slack_joint);
            results["slack_quantum"] = jnum(r.slack_quantum);
        } else if (mode == "unlimited-direct") {
            SmoothingBudget b;
            b.epsilon = eps;
            b.delta_prime = dprime;
            auto r = unlimited_direct(ens, channel, c, q, b);
            results["feasible"] = r.feasible;
            results["achieved_error"] = jnum(r.achieved_error);
            results["slack"] = jnum(r.slack);
        } else if (mode == "unlimited-converse") {
            auto r = unlimited_converse(ens, channel, c, q, iota, delta);
            results["holds"] = r.holds;
            results["lambda"] = jnum(r.lambda);
            results["saturated"] = r.saturated;
            results["slack"] = jnum(r.slack);
        } else {
            throw InputError("unknown bound mode '" + mode + "'");
        }
    } catch (const std::invalid_argument& ex) {
        throw InputError(ex.what());
    }

    json config{{"channel", channel_path},
                {"state", state_path},
                {"mode", mode},
                {"c", jnum(c)},
                {"q", jnum(q)},
                {"e", jnum(e)},
                {"delta", jnum(delta)},
                {"eps", jnum(eps)},
                {"delta1", jnum(delta1)},
                {"delta2", jnum(delta2)},
                {"dprime", jnum(dprime)},
                {"iota", jnum(iota)}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(echo, config, results, out_path, wall);
    return 0;
}

int cmd_region(const std::string& channel_path, const std::string& mode, double delta, int grid,
               std::uint64_t seed, const std::string& out_path, const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    if (out_path.empty()) throw InputError("region requires --out (CSV path)");
    auto channel = parse_channel(load_json(channel_path), channel_path);

    std::vector<std::pair<int, int>> splits = {{2, 1}, {4, 1}, {1, 2}, {2, 2}};
    auto family = default_ensemble_family(channel, splits, std::max(1, grid / 2), seed);
    if (family.empty()) throw InputError("no admissible ensemble splits for this channel");

    json sidecar;
    std::ostringstream csv;
    if (mode == "oneshot") {
        auto reg = simultaneous_region(channel, delta, family, std::max(1, grid / 4),
                                       std::max(2, grid / 4));
        csv << "kind,c,q\n";
        for (const auto& v : reg.inner.vertices)
            csv << "inner," << fmt_double(v[0]) << "," << fmt_double(v[1]) << "\n";
        for (const auto& v : reg.outer.vertices)
            csv << "outer," << fmt_double(v[0]) << "," << fmt_double(v[1]) << "\n";
        auto pieces = [&](const Region2D& r) {
            json arr = json::array();
            for (const auto& p : r.pieces)
                arr.push_back({{"cap_c", jnum(p.cap_c)},
                               {"cap_q", jnum(p.cap_q)},
                               {"cap_joint", jnum(p.cap_joint)},
                               {"slack_param", jnum(p.slack_param)}});
            return arr;
        };
        sidecar["inner_pieces"] = pieces(reg.inner);
        sidecar["outer_pieces"] = pieces(reg.outer);
        sidecar["skipped_smoothing"] = reg.skipped_smoothing;
    } else if (mode == "asymptotic") {
        auto u = region_union(channel, family, 1);
        csv << "C,Q,E\n";
        for (const auto& v : u.vertices)
            csv << fmt_double(v[0]) << "," << fmt_double(v[1]) << "," << fmt_double(v[2]) << "\n";
        json faces = json::array();
        for (const auto& ens : family) {
            auto tr = theta_region(channel, ens);
            json ineqs = json::array();
            for (const auto& h : tr.inequalities)
                ineqs.push_back(
                    {{"normal", {jnum(h.normal[0]), jnum(h.normal[1]), jnum(h.normal[2])}},
                     {"offset", jnum(h.offset)},
                     {"name", h.name}});
            faces.push_back({{"inequalities", ineqs}});
        }
        sidecar["pieces"] = faces;
    } else {
        throw InputError("unknown region mode '" + mode + "'");
    }

    std::ofstream f(out_path);
    if (!f) throw InputError("cannot write output file: " + out_path);
    f << csv.str();

    json config{{"channel", channel_path}, {"mode", mode}, {"delta", jnum(delta)},
                {"grid", grid},            {"seed", seed}, {"out", out_path}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(echo, config, sidecar, out_path + ".json", wall);
    return 0;
}

int cmd_decouple(const std::string& instance_path, int samples, std::uint64_t seed,
                 const std::string& out_path, const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    json j = load_json(instance_path);
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw InputError(instance_path + ": instance version must be 1");
    const int num_blocks = j.value("num_blocks", 0);
    const int block_dim = j.value("block_dim", 0);
    const int ref_dim = j.value("ref_dim", block_dim);
    if (num_blocks < 1 || block_dim < 1 || ref_dim < 1)
        throw InputError(instance_path + ": bad block structure");
    const double eps = j.value("epsilon", 0.0);
    const double mu = j.value("mu", 0.0);
    if (samples < 2) throw InputError("need at least two samples");

    DensityOperator psi = [&]() {
        if (j.contains("state") && j["state"].is_object() &&
            j["state"].value("kind", "") == "explicit") {
            SystemLayout lay(
                {{"Ac", num_blocks}, {"Ar", block_dim}, {"Rc", num_blocks}, {"Rr", ref_dim}});
            MatrixXcd m = parse_complex_matrix(j["state"].at("data"), lay.dim(), lay.dim(),
                                               instance_path + ": state");
            try {
                return DensityOperator(m, lay);
            } catch (const std::invalid_argument& e) {
                throw InputError(instance_path + ": " + std::string(e.what()));
            }
        }
        RngStream rng(j.value("state_seed", 7), 99);
        return random_classically_coherent(num_blocks, block_dim, ref_dim, rng);
    }();

    ChannelRep map = [&]() {
        if (j.contains("map")) return parse_channel(j["map"], instance_path + ": map");
        // default target: trace out the sector index
        std::vector<MatrixXcd> ks;
        for (int b = 0; b < num_blocks; ++b) {
            MatrixXcd k = MatrixXcd::Zero(block_dim, num_blocks * block_dim);
            k.block(0, b * block_dim, block_dim, block_dim) =
                MatrixXcd::Identity(block_dim, block_dim);
            ks.push_back(k);
        }
        return ChannelRep::from_kraus(ks, SystemLayout({{"Ac", num_blocks}, {"Ar", block_dim}}),
                                      SystemLayout::single("E", block_dim));
    }();
    if (map.in_dim() != num_blocks * block_dim)
        throw InputError(instance_path + ": map input must equal the block structure");

    RPDInstance inst = [&]() {
        try {
            return RPDInstance::make(psi, map, eps, mu);
        } catch (const std::invalid_argument& e) {
            throw InputError(instance_path + ": " + std::string(e.what()));
        }
    }();
    auto rep = verify_direct_theorem(inst, samples, seed);

    json results;
    results["mean_delta"] = jnum(rep.mean_delta);
    results["std_error"] = jnum(rep.std_error);
    results["bound_rhs"] = jnum(rep.bound_rhs);
    results["n_samples"] = rep.n_samples;
    results["exponent_perm"] = jnum(rep.exponent_perm);
    results["exponent_block"] = jnum(rep.exponent_block);
    results["pass"] = rep.pass;

    json config{{"instance", instance_path}, {"samples", samples}, {"seed", seed}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(echo, config, results, out_path, wall);
    std::fprintf(stderr, "%s\n", rep.pass ? "PASS" : "FAIL");
    return rep.pass ? 0 : 4;
}

int cmd_channel_validate(const std::string& channel_path, const std::string& out_path,
                         const std::string& echo) {
    const auto t0 = std::chrono::steady_clock::now();
    auto channel = parse_channel(load_json(channel_path), channel_path);
    json results;
    results["valid"] = true;
    results["d_in"] = channel.in_dim();
    results["d_out"] = channel.out_dim();
    results["kraus_rank"] = static_cast<int>(channel.kraus().size());
    json config{{"channel", channel_path}};
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit_report(echo, config, results, out_path, wall);
    return 0;
}

std::string command_echo(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += " ";
        s += argv[i];
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* tol = std::getenv("QCAP_SOLVER_TOL")) {
        const double v = std::atof(tol);
        if (v > 0) tolerances().sdp_rel_gap = v;
    }

    CLI::App app{"one-shot and asymptotic quantum channel capacity bounds"};
    app.require_subcommand(1);

    std::string channel_path, state_path, out_path, target_csv = "A";
    std::string which = "hmin", mode = "direct", instance_path;
    double eps = 0, delta = 1.0, delta1 = 0.5, delta2 = 0.5, dprime = 0.25, iota = 0.5;
    double c = 0, q = 0, e = 0;
    int samples = 2000, grid = 8;
    std::uint64_t seed = 1;

    auto* entropy = app.add_subcommand("entropy", "conditional min/max entropies of a state");
    entropy->add_option("--state", state_path, "state spec file")->required();
    entropy->add_option("--which", which, "hmin|hmax|hmin_smooth|hmax_smooth|vn");
    entropy->add_option("--target", target_csv, "comma separated target labels");
    entropy->add_option("--eps", eps, "smoothing parameter");
    entropy->add_option("--out", out_path, "write the JSON report here");

    auto* bound = app.add_subcommand("bound", "one-shot feasibility and converse checks");
    bound->add_option("--channel", channel_path)->required();
    bound->add_option("--state", state_path, "input ensemble on {Sc,Sr,A}")->required();
    bound->add_option("--mode", mode, "direct|converse|unlimited-direct|unlimited-converse");
    bound->add_option("--c", c);
    bound->add_option("--q", q);
    bound->add_option("--e", e);
    bound->add_option("--delta", delta);
    bound->add_option("--eps", eps);
    bound->add_option("--delta1", delta1);
    bound->add_option("--delta2", delta2);
    bound->add_option("--dprime", dprime);
    bound->add_option("--iota", iota);
    bound->add_option("--out", out_path);

    auto* region = app.add_subcommand("region", "rate-region vertex dumps");
    region->add_option("--channel", channel_path)->required();
    region->add_option("--mode", mode, "oneshot|asymptotic");
    region->add_option("--delta", delta);
    region->add_option("--grid", grid);
    region->add_option("--seed", seed);
    region->add_option("--out", out_path, "CSV path (JSON sidecar alongside)")->required();

    auto* decouple = app.add_subcommand("decouple", "Monte-Carlo decoupling verification");
    decouple->add_option("--instance", instance_path)->required();
    decouple->add_option("--samples", samples);
    decouple->add_option("--seed", seed);
    decouple->add_option("--out", out_path);

    auto* channel_cmd = app.add_subcommand("channel", "channel spec utilities");
    auto* validate = channel_cmd->add_subcommand("validate", "parse and validate a channel spec");
    validate->add_option("--channel", channel_path)->required();
    validate->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int rc = app.exit(ex);
        return rc == 0 ? 0 : 2;
    }

    const std::string echo = command_echo(argc, argv);
    try {
        if (entropy->parsed())
            return cmd_entropy(state_path, which, target_csv, eps, out_path, echo);
        if (bound->parsed())
            return cmd_bound(channel_path, state_path, mode, c, q, e, delta, eps, delta1, delta2,
                             dprime, iota, out_path, echo);
        if (region->parsed())
            return cmd_region(channel_path, mode, delta, grid, seed, out_path, echo);
        if (decouple->parsed()) return cmd_decouple(instance_path, samples, seed, out_path, echo);
        if (channel_cmd->parsed() && validate->parsed())
            return cmd_channel_validate(channel_path, out_path, echo);
        std::fprintf(stderr, "no command given\n");
        return 2;
    } catch (const InputError& ex) {
        std::fprintf(stderr, "input error: %s\n", ex.what());
        return 2;
    } catch (const SolverError& ex) {
        std::fprintf(stderr, "solver error: %s\n", ex.what());
        return 3;
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "internal error: %s\n", ex.what());
        return 4;
    }
}
