#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "regula/decision.hpp"
#include "regula/empirics.hpp"
#include "regula/error.hpp"
#include "regula/io.hpp"
#include "regula/realization.hpp"

namespace regula::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct Invocation {
    Json config;
    fs::path base;  // directory of the config file
    fs::path out_dir;
    std::optional<std::uint64_t> seed_override;
};

void check_keys(const Json& config, const std::set<std::string>& allowed) {
    for (auto it = config.begin(); it != config.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown config key \"" + it.key() + "\"");
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError(std::string(what) + " must be a decimal unsigned 64-bit integer, got '" + s + "'");
    return v;
}

std::uint64_t as_u64(const Json& j, const char* what) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    if (j.is_string()) return parse_u64(j.get<std::string>(), what);
    throw ConfigError(std::string(what) + " must be an unsigned integer");
}

double as_double(const Json& j, const char* what) {
    if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
    return j.get<double>();
}

template <typename T>
T get_or(const Json& config, const char* key, T fallback) {
    if (!config.contains(key)) return fallback;
    if constexpr (std::is_same_v<T, double>) {
        return as_double(config.at(key), key);
    } else if constexpr (std::is_same_v<T, bool>) {
        if (!config.at(key).is_boolean()) throw ConfigError(std::string(key) + " must be a boolean");
        return config.at(key).get<bool>();
    } else {
        return static_cast<T>(as_u64(config.at(key), key));
    }
}

std::string require_string(const Json& config, const char* key) {
    if (!config.contains(key)) throw ConfigError(std::string("missing config key \"") + key + "\"");
    if (!config.at(key).is_string()) throw ConfigError(std::string("config key \"") + key + "\" must be a string");
    return config.at(key).get<std::string>();
}

fs::path existing_file(const Invocation& inv, const std::string& relative) {
    const fs::path p = fs::path(relative).is_absolute() ? fs::path(relative) : inv.base / relative;
    if (!fs::is_regular_file(p)) throw ConfigError("referenced file does not exist: " + p.string());
    return p;
}

// Inline JSON object, or a path to a JSON file.
Json document(const Invocation& inv, const Json& value, const char* what) {
    if (value.is_string()) {
        const fs::path p = existing_file(inv, value.get<std::string>());
        return io::parse_json(io::read_file(p), p.string());
    }
    if (value.is_object() || value.is_array()) return value;
    throw ConfigError(std::string(what) + " must be an inline JSON value or a file path");
}

std::optional<Alphabet> config_alphabet(const Json& config) {
    if (!config.contains("alphabet")) return std::nullopt;
    try {
        return io::alphabet_from_json(config.at("alphabet"));
    } catch (const DataError& e) {
        throw ConfigError(std::string("config alphabet: ") + e.what());
    }
}

EstimatorParams estimator_params(const Json& config) {
    EstimatorParams p;
    p.epsilon = get_or(config, "epsilon", p.epsilon);
    p.windows = get_or<std::size_t>(config, "windows", p.windows);
    p.tail_fraction = get_or(config, "tail_fraction", p.tail_fraction);
    if (!(p.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (p.windows < 1) throw ConfigError("windows must be at least 1");
    if (!(p.tail_fraction > 0.0 && p.tail_fraction <= 1.0)) throw ConfigError("tail_fraction must lie in (0, 1]");
    return p;
}

io::Stream load_stream(const Invocation& inv, const std::string& key, const std::optional<Alphabet>& alphabet) {
    const fs::path p = existing_file(inv, require_string(inv.config, key.c_str()));
    return io::stream_from_text(io::read_file(p), alphabet);
}

// Default stride keeps sequence trajectories near 2000 points.
std::size_t stride_for(const Json& config, std::size_t length) {
    const auto fallback = std::max<std::size_t>(1, length / 2000);
    const auto stride = get_or<std::size_t>(config, "stride", fallback);
    if (stride < 1) throw ConfigError("stride must be at least 1");
    return stride;
}

Trajectory measure_trajectory(const io::Stream& stream, const Json& config) {
    if (const auto* net = std::get_if<SamplingNet>(&stream)) return net_trajectory(*net);
    const auto& seq = std::get<SymbolSequence>(stream);
    return prefix_trajectory(seq, stride_for(config, seq.size()));
}

const Alphabet& stream_alphabet(const io::Stream& stream) {
    return std::visit([](const auto& s) -> const Alphabet& { return s.alphabet(); }, stream);
}

void write_output(const Invocation& inv, const std::string& name, const std::string& content) {
    io::write_atomic(inv.out_dir / name, content);
}

Json points_json(const PointCloud& cloud) {
    Json arr = Json::array();
    for (std::size_t i = 0; i < cloud.size(); ++i) arr.push_back(std::vector<double>(cloud[i].begin(), cloud[i].end()));
    return arr;
}

// ---------------------------------------------------------------------------

int cmd_generate(const Invocation& inv, std::ostream& out) {
    const Json& c = inv.config;
    check_keys(c, {"mode", "regularity", "measure", "alphabet", "schedule", "seed", "length", "epsilon", "path",
                   "output", "out_dir"});
    const std::string mode = require_string(c, "mode");
    std::optional<std::uint64_t> seed = inv.seed_override;
    if (!seed && c.contains("seed")) seed = as_u64(c.at("seed"), "seed");

    auto regularity = [&] {
        if (!c.contains("regularity")) throw ConfigError("mode " + mode + " needs \"regularity\"");
        return io::regularity_from_json(document(inv, c.at("regularity"), "regularity"));
    };

    std::string content;
    std::string default_name;
    if (mode == "net") {
        RealizationSchedule schedule;
        if (c.contains("schedule")) {
            try {
                schedule = io::schedule_from_json(c.at("schedule"));
            } catch (const DataError& e) {
                throw ConfigError(e.what());
            }
        }
        const SamplingNet net = net_realize(regularity(), schedule, seed);
        content = io::net_to_jsonl(net);
        default_name = "net.jsonl";
        out << "generated sampling net: " << net.size() << " items over " << net.alphabet().size() << " symbols\n";
    } else if (mode == "sequence") {
        if (!c.contains("length") || !c.contains("epsilon")) throw ConfigError("mode sequence needs \"length\" and \"epsilon\"");
        SequenceOptions opts;
        opts.as_path = get_or(c, "path", false);
        const SymbolSequence seq =
            sequence_realize(regularity(), get_or<std::uint64_t>(c, "length", 0), get_or(c, "epsilon", 0.0), opts);
        content = io::sequence_to_json(seq);
        default_name = "sequence.json";
        out << "generated sequence: " << seq.size() << " symbols\n";
    } else if (mode == "iid") {
        if (!c.contains("measure") || !c.contains("length")) throw ConfigError("mode iid needs \"measure\" and \"length\"");
        if (!seed) throw ConfigError("mode iid needs a seed (config \"seed\" or --seed)");
        const Measure mu = io::measure_from_json(document(inv, c.at("measure"), "measure"), config_alphabet(c));
        const SymbolSequence seq = iid_generate(mu, get_or<std::uint64_t>(c, "length", 0), *seed);
        content = io::sequence_to_json(seq);
        default_name = "sequence.json";
        out << "generated i.i.d. sequence: " << seq.size() << " symbols, seed " << *seed << "\n";
    } else {
        throw ConfigError("mode must be one of net, sequence, iid; got '" + mode + "'");
    }
    const std::string name = c.contains("output") ? require_string(c, "output") : default_name;
    write_output(inv, name, content);
    return kExitOk;
}

int cmd_estimate(const Invocation& inv, std::ostream& out) {
    const Json& c = inv.config;
    check_keys(c, {"stream", "alphabet", "epsilon", "windows", "tail_fraction", "stride", "gamma", "target", "out_dir"});
    const EstimatorParams params = estimator_params(c);
    const io::Stream stream = load_stream(inv, "stream", config_alphabet(c));
    const Alphabet& alphabet = stream_alphabet(stream);

    std::optional<Trajectory> trajectory;
    if (c.contains("gamma")) {
        const auto* net = std::get_if<SamplingNet>(&stream);
        if (!net) throw ConfigError("\"gamma\" applies to sampling nets only");
        const Json& g = c.at("gamma");
        if (!g.is_array() || g.empty()) throw ConfigError("gamma must be a nonempty array of rows");
        std::vector<double> values;
        for (const auto& row : g) {
            if (!row.is_array() || row.size() != alphabet.size())
                throw ConfigError("each gamma row needs one value per alphabet symbol");
            for (const auto& v : row) values.push_back(as_double(v, "gamma entry"));
        }
        trajectory = average_trajectory(*net, TestFunction(alphabet, g.size(), std::move(values)));
    } else {
        trajectory = measure_trajectory(stream, c);
    }

    const LimitSetEstimate estimate = estimate_limit_set(*trajectory, params);
    Json j = io::to_json(estimate);
    out << "retained " << estimate.centers.size() << " limit-point center(s) from " << estimate.tail_size
        << " tail points\n";
    if (c.contains("target")) {
        if (c.contains("gamma")) throw ConfigError("\"target\" compares measures; drop \"gamma\"");
        const Regularity target = io::regularity_from_json(document(inv, c.at("target"), "target"));
        const double h = hausdorff(to_regularity(estimate, alphabet), target);
        j["hausdorff_to_target"] = h;
        out << "hausdorff distance to target: " << io::format_double(h) << "\n";
    }
    write_output(inv, "estimate.json", j.dump(2) + "\n");
    write_output(inv, "trajectory.csv", io::trajectory_to_csv(*trajectory));
    return kExitOk;
}

int cmd_equiv(const Invocation& inv, std::ostream& out) {
    const Json& c = inv.config;
    check_keys(c, {"stream1", "stream2", "alphabet", "epsilon", "windows", "tail_fraction", "stride", "out_dir"});
    const EstimatorParams params = estimator_params(c);
    const auto alphabet = config_alphabet(c);
    const io::Stream first = load_stream(inv, "stream1", alphabet);
    const io::Stream second = load_stream(inv, "stream2", alphabet);
    if (!(stream_alphabet(first) == stream_alphabet(second))) throw DataError("equiv: the streams use different alphabets");

    const auto verdict = s_equivalent(stream_alphabet(first), measure_trajectory(first, c), measure_trajectory(second, c), params);
    Json j;
    j["epsilon"] = params.epsilon;
    j["windows"] = params.windows;
    if (const auto* eq = std::get_if<Equivalent>(&verdict)) {
        j["verdict"] = "equivalent";
        j["hausdorff"] = eq->hausdorff;
        out << "equivalent (hausdorff " << io::format_double(eq->hausdorff) << ")\n";
    } else {
        const auto& d = std::get<Distinct>(verdict);
        j["verdict"] = "distinct";
        j["hausdorff"] = d.hausdorff;
        Json rows = Json::array();
        for (std::size_t r = 0; r < d.witness.gamma.rows(); ++r)
            rows.push_back(std::vector<double>(d.witness.gamma.row(r).begin(), d.witness.gamma.row(r).end()));
        Json witness;
        witness["gamma"] = std::move(rows);
        witness["best_row"] = d.witness.best_row;
        witness["best_separation"] = d.witness.best_separation;
        j["witness"] = std::move(witness);
        j["image_first"] = points_json(d.image_first.points);
        j["image_second"] = points_json(d.image_second.points);
        out << "distinct (hausdorff " << io::format_double(d.hausdorff) << "); witness row " << d.witness.best_row
            << " separates images by " << io::format_double(d.witness.best_separation) << "\n";
    }
    write_output(inv, "verdict.json", j.dump(2) + "\n");
    return kExitOk;
}

int cmd_decide(const Invocation& inv, std::ostream& out) {
    const Json& c = inv.config;
    check_keys(c, {"loss", "measure", "regularity", "out_dir"});
    if (c.contains("measure") && c.contains("regularity")) throw ConfigError("give either \"measure\" or \"regularity\", not both");
    const LossMatrix loss = io::loss_from_csv(io::read_file(existing_file(inv, require_string(c, "loss"))));

    CriterionReport report = [&] {
        if (c.contains("measure"))
            return bayes(loss, io::measure_from_json(document(inv, c.at("measure"), "measure"), loss.thetas()));
        if (c.contains("regularity"))
            return regularity_criterion(loss, io::regularity_from_json(document(inv, c.at("regularity"), "regularity")));
        return minimax(loss);
    }();

    out << io::kind_name(report.kind) << " criterion\n";
    std::size_t width = 8;
    for (const auto& u : loss.decisions()) width = std::max(width, u.size() + 2);
    for (std::size_t u = 0; u < loss.decision_count(); ++u) {
        const bool best = std::find(report.argmin.begin(), report.argmin.end(), u) != report.argmin.end();
        out << "  " << std::left << std::setw(static_cast<int>(width)) << loss.decisions()[u]
            << io::format_double(report.values[u]) << (best ? "  *" : "") << "\n";
    }
    write_output(inv, "report.json", io::to_json(report, loss).dump(2) + "\n");
    return kExitOk;
}

int cmd_verify(const Invocation& inv, std::ostream& out) {
    const Json& c = inv.config;
    check_keys(c, {"stream", "loss", "decision", "r1", "r2", "windows", "tail_fraction", "out_dir"});
    const LossMatrix loss = io::loss_from_csv(io::read_file(existing_file(inv, require_string(c, "loss"))));
    const std::string decision = require_string(c, "decision");
    if (!c.contains("r1") || !c.contains("r2")) throw ConfigError("verify needs \"r1\" and \"r2\"");
    const double r1 = as_double(c.at("r1"), "r1");
    const double r2 = as_double(c.at("r2"), "r2");
    Proposition3Params params;
    params.windows = get_or<std::size_t>(c, "windows", params.windows);
    params.tail_fraction = get_or(c, "tail_fraction", params.tail_fraction);

    const io::Stream stream = load_stream(inv, "stream", loss.thetas());
    const auto* net = std::get_if<SamplingNet>(&stream);
    if (!net) throw DataError("verify expects a sampling net stream");
    const Proposition3Report rep = verify_proposition3(*net, loss, decision, r1, r2, params);

    Json j;
    j["decision"] = decision;
    j["r1"] = r1;
    j["r2"] = r2;
    j["r1_exceeded_cofinally"] = rep.r1_exceeded_cofinally;
    j["r2_respected_eventually"] = rep.r2_respected_eventually;
    j["empirical_limsup"] = rep.empirical_limsup;
    out << "r1 exceeded cofinally: " << (rep.r1_exceeded_cofinally ? "yes" : "no") << "\n"
        << "r2 respected eventually: " << (rep.r2_respected_eventually ? "yes" : "no") << "\n"
        << "empirical limsup: " << io::format_double(rep.empirical_limsup) << "\n";
    write_output(inv, "prop3.json", j.dump(2) + "\n");
    write_output(inv, "running_average.csv", io::trajectory_to_csv(rep.average_loss));
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Realize, estimate and compare statistical regularities; decide against them."};
    app.require_subcommand(1);
    std::string config_path;
    std::string seed_text;
    std::string out_dir;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"generate", "write a sampling net or symbol sequence"},
        {"estimate", "estimate the limit set of a stream"},
        {"equiv", "test two streams for statistical equivalence"},
        {"decide", "evaluate minimax, Bayes or regularity criteria"},
        {"verify", "check the upper-bound property of the regularity criterion on a net"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config document")->required();
        sub->add_option("--seed", seed_text, "override the config seed (decimal u64)");
        sub->add_option("--out", out_dir, "output directory");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        Invocation inv;
        const fs::path cfg(config_path);
        if (!fs::is_regular_file(cfg)) throw ConfigError("config file does not exist: " + config_path);
        try {
            inv.config = io::parse_json(io::read_file(cfg), "config");
        } catch (const DataError& e) {
            throw ConfigError(e.what());
        }
        if (!inv.config.is_object()) throw ConfigError("config must be a JSON object");
        inv.base = cfg.has_parent_path() ? cfg.parent_path() : fs::path(".");
        if (!seed_text.empty()) inv.seed_override = parse_u64(seed_text, "--seed");
        if (!out_dir.empty()) inv.out_dir = out_dir;
        else if (inv.config.contains("out_dir")) inv.out_dir = inv.base / require_string(inv.config, "out_dir");
        else inv.out_dir = inv.base;
        std::error_code ec;
        fs::create_directories(inv.out_dir, ec);
        if (ec) throw ConfigError("cannot create output directory " + inv.out_dir.string());

        if (command == "generate") return cmd_generate(inv, out);
        if (command == "estimate") return cmd_estimate(inv, out);
        if (command == "equiv") return cmd_equiv(inv, out);
        if (command == "decide") return cmd_decide(inv, out);
        return cmd_verify(inv, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Config: return kExitConfig;
            case ErrorKind::Data: return kExitData;
            case ErrorKind::Precondition: return kExitPrecondition;
        }
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace regula::cli
