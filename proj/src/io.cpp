#include "regula/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "regula/error.hpp"

namespace regula::io {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw DataError("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError("cannot move output into place at '" + path.string() + "'");
    }
}

Json parse_json(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(what + ": malformed JSON (" + e.what() + ")");
    }
}

namespace {

// Wraps nlohmann type errors into DataError.
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string(what) + ": " + e.what());
    }
}

std::vector<double> doubles(const Json& j, const char* what) {
    if (!j.is_array()) throw DataError(std::string(what) + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw DataError(std::string(what) + ": expected a number");
        out.push_back(v.get<double>());
    }
    return out;
}

const Json& field(const Json& j, const char* key, const char* what) {
    if (!j.is_object()) throw DataError(std::string(what) + ": expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw DataError(std::string(what) + ": missing \"" + key + "\"");
    return *it;
}

SymbolIndex symbol_index(const Alphabet& alphabet, const Json& s, const char* what) {
    if (!s.is_string()) throw DataError(std::string(what) + ": symbols must be strings");
    const auto idx = alphabet.index_of(s.get_ref<const std::string&>());
    if (!idx) throw DataError(std::string(what) + ": symbol '" + s.get<std::string>() + "' is not in the alphabet");
    return *idx;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& s, const char* what) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && s.front() == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) throw DataError(std::string(what) + ": '" + s + "' is not a number");
    return v;
}

}  // namespace

Alphabet alphabet_from_json(const Json& j) {
    if (!j.is_array()) throw DataError("alphabet: expected an array of strings");
    std::vector<std::string> symbols;
    for (const auto& s : j) {
        if (!s.is_string()) throw DataError("alphabet: symbols must be strings");
        symbols.push_back(s.get<std::string>());
    }
    return Alphabet(std::move(symbols));
}

Json to_json(const Alphabet& alphabet) { return Json(alphabet.symbols()); }

Measure measure_from_json(const Json& j, const std::optional<Alphabet>& fallback) {
    if (j.is_array()) {
        if (!fallback) throw DataError("measure: a bare weight array needs an alphabet");
        return make_measure(*fallback, doubles(j, "measure"));
    }
    const Alphabet alphabet = alphabet_from_json(field(j, "alphabet", "measure"));
    if (fallback && !(alphabet == *fallback)) throw DataError("measure: alphabet does not match the expected labels");
    return make_measure(alphabet, doubles(field(j, "weights", "measure"), "measure weights"));
}

Regularity regularity_from_json(const Json& j) {
    const Alphabet alphabet = alphabet_from_json(field(j, "alphabet", "regularity"));
    const Json& convex = field(j, "convex", "regularity");
    if (!convex.is_boolean()) throw DataError("regularity: \"convex\" must be a boolean");
    const Json& measures = field(j, "measures", "regularity");
    if (!measures.is_array()) throw DataError("regularity: \"measures\" must be an array");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "alphabet" && it.key() != "convex" && it.key() != "measures")
            throw DataError("regularity: unknown key \"" + it.key() + "\"");
    std::vector<Measure> points;
    for (const auto& m : measures) points.push_back(make_measure(alphabet, doubles(m, "regularity measure")));
    return Regularity(alphabet, std::move(points), convex.get<bool>());
}

Json to_json(const Regularity& regularity) {
    Json measures = Json::array();
    for (const auto& p : regularity.points()) measures.push_back(std::vector<double>(p.weights().begin(), p.weights().end()));
    Json j;
    j["alphabet"] = to_json(regularity.alphabet());
    j["convex"] = regularity.convex();
    j["measures"] = std::move(measures);
    return j;
}

Json to_json(const RealizationSchedule& s) {
    Json j;
    j["rounds"] = s.rounds;
    j["epsilon0"] = s.epsilon0;
    j["denominator0"] = s.denominator0;
    j["sweeps"] = s.sweeps;
    return j;
}

RealizationSchedule schedule_from_json(const Json& j) {
    if (!j.is_object()) throw DataError("schedule: expected a JSON object");
    RealizationSchedule s;
    return guarded("schedule", [&] {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& k = it.key();
            if (k == "rounds") s.rounds = it->get<std::size_t>();
            else if (k == "epsilon0") s.epsilon0 = it->get<double>();
            else if (k == "denominator0") s.denominator0 = it->get<std::uint64_t>();
            else if (k == "sweeps") s.sweeps = it->get<std::size_t>();
            else throw DataError("schedule: unknown key \"" + k + "\"");
        }
        return s;
    });
}

Json to_json(const GeneratorMeta& meta) {
    Json j;
    j["generator"] = meta.generator;
    if (meta.seed) j["seed"] = *meta.seed;
    if (meta.schedule) j["schedule"] = to_json(*meta.schedule);
    if (meta.epsilon) j["epsilon"] = *meta.epsilon;
    return j;
}

GeneratorMeta meta_from_json(const Json& j) {
    GeneratorMeta meta;
    if (j.is_null()) return meta;
    if (!j.is_object()) throw DataError("meta: expected a JSON object");
    return guarded("meta", [&] {
        if (j.contains("generator")) meta.generator = j.at("generator").get<std::string>();
        if (j.contains("seed")) meta.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("schedule")) meta.schedule = schedule_from_json(j.at("schedule"));
        if (j.contains("epsilon")) meta.epsilon = j.at("epsilon").get<double>();
        return meta;
    });
}

std::string net_to_jsonl(const SamplingNet& net) {
    std::string out;
    Json header;
    header["alphabet"] = to_json(net.alphabet());
    header["meta"] = to_json(net.meta());
    out += header.dump();
    out += '\n';
    std::uint64_t lambda = 0;
    for (const auto& item : net.items()) {
        Json rec;
        rec["lambda"] = ++lambda;
        rec["round"] = item.round;
        rec["target"] = item.target;
        Json tuple = Json::array();
        for (SymbolIndex s : item.tuple) tuple.push_back(net.alphabet().symbol(s));
        rec["tuple"] = std::move(tuple);
        out += rec.dump();
        out += '\n';
    }
    return out;
}

SamplingNet net_from_jsonl(const std::string& text, const std::optional<Alphabet>& alphabet) {
    std::istringstream in(text);
    std::string line;
    std::optional<Alphabet> alpha = alphabet;
    GeneratorMeta meta;
    std::vector<Json> records;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j = parse_json(line, "net line " + std::to_string(line_no));
        if (!j.is_object()) throw DataError("net line " + std::to_string(line_no) + ": expected a JSON object");
        if (j.contains("alphabet") && !j.contains("tuple")) {
            if (!records.empty()) throw DataError("net header must precede the items");
            const Alphabet header = alphabet_from_json(j.at("alphabet"));
            if (alpha && !(header == *alpha)) throw DataError("net header alphabet does not match the expected one");
            alpha = header;
            if (j.contains("meta")) meta = meta_from_json(j.at("meta"));
            continue;
        }
        records.push_back(std::move(j));
    }
    if (records.empty()) throw DataError("net file contains no items");
    if (!alpha) {
        std::vector<std::string> seen;
        for (const auto& r : records) {
            const Json& tuple = field(r, "tuple", "net item");
            if (!tuple.is_array()) throw DataError("net item: \"tuple\" must be an array");
            for (const auto& s : tuple) {
                if (!s.is_string()) throw DataError("net item: symbols must be strings");
                if (std::find(seen.begin(), seen.end(), s.get<std::string>()) == seen.end())
                    seen.push_back(s.get<std::string>());
            }
        }
        alpha = Alphabet(std::move(seen));
    }
    std::vector<NetItem> items;
    items.reserve(records.size());
    std::uint64_t expected = 0;
    for (const auto& r : records) {
        ++expected;
        NetItem item;
        guarded("net item", [&] {
            if (r.contains("lambda") && r.at("lambda").get<std::uint64_t>() != expected)
                throw DataError("net item: lambda " + r.at("lambda").dump() + " out of sequence (expected " +
                                std::to_string(expected) + ")");
            if (r.contains("round")) item.round = r.at("round").get<std::size_t>();
            if (r.contains("target")) item.target = r.at("target").get<std::size_t>();
            return 0;
        });
        const Json& tuple = field(r, "tuple", "net item");
        if (!tuple.is_array()) throw DataError("net item: \"tuple\" must be an array");
        for (const auto& s : tuple) item.tuple.push_back(symbol_index(*alpha, s, "net item"));
        items.push_back(std::move(item));
    }
    return SamplingNet(*alpha, std::move(items), std::move(meta));
}

std::string sequence_to_json(const SymbolSequence& sequence) {
    Json j;
    j["alphabet"] = to_json(sequence.alphabet());
    Json symbols = Json::array();
    for (SymbolIndex s : sequence.symbols()) symbols.push_back(sequence.alphabet().symbol(s));
    j["symbols"] = std::move(symbols);
    j["meta"] = to_json(sequence.meta());
    return j.dump() + "\n";
}

SymbolSequence sequence_from_json(const std::string& text, const std::optional<Alphabet>& alphabet) {
    const Json j = parse_json(text, "sequence");
    const Alphabet alpha = j.is_object() && j.contains("alphabet") ? alphabet_from_json(j.at("alphabet"))
                           : alphabet                              ? *alphabet
                                                                   : throw DataError("sequence: missing \"alphabet\"");
    if (alphabet && !(alpha == *alphabet)) throw DataError("sequence alphabet does not match the expected one");
    const Json& symbols = field(j, "symbols", "sequence");
    if (!symbols.is_array()) throw DataError("sequence: \"symbols\" must be an array");
    std::vector<SymbolIndex> out;
    out.reserve(symbols.size());
    for (const auto& s : symbols) out.push_back(symbol_index(alpha, s, "sequence"));
    GeneratorMeta meta = j.contains("meta") ? meta_from_json(j.at("meta")) : GeneratorMeta{};
    return SymbolSequence(alpha, std::move(out), std::move(meta));
}

Stream stream_from_text(const std::string& text, const std::optional<Alphabet>& alphabet) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw DataError("stream file is empty");
    // A sequence is a single JSON document with "symbols"; anything else
    // is read as JSON lines.
    bool is_sequence = false;
    try {
        const Json j = Json::parse(text);
        is_sequence = j.is_object() && j.contains("symbols");
    } catch (const nlohmann::json::exception&) {
        is_sequence = false;
    }
    if (is_sequence) return sequence_from_json(text, alphabet);
    return net_from_jsonl(text, alphabet);
}

std::string trajectory_to_csv(const Trajectory& trajectory) {
    std::string out = "index";
    for (std::size_t d = 0; d < trajectory.dim(); ++d) out += ",dim" + std::to_string(d);
    out += '\n';
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        out += std::to_string(trajectory.index(i));
        for (double v : trajectory[i]) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

Json to_json(const LimitSetEstimate& estimate) {
    Json j;
    j["epsilon"] = estimate.epsilon;
    j["windows"] = estimate.windows;
    Json centers = Json::array();
    for (std::size_t i = 0; i < estimate.centers.size(); ++i)
        centers.push_back(std::vector<double>(estimate.centers[i].begin(), estimate.centers[i].end()));
    j["centers"] = std::move(centers);
    j["visits"] = estimate.visits;
    return j;
}

LossMatrix loss_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.size() < 2) throw DataError("loss matrix: need a header row and at least one theta row");
    const auto& header = rows.front();
    if (header.size() < 2) throw DataError("loss matrix: header has no decision labels");
    std::vector<std::string> decisions(header.begin() + 1, header.end());
    std::vector<std::string> thetas;
    std::vector<double> values;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != header.size())
            throw DataError("loss matrix: row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                            " cells, expected " + std::to_string(header.size()));
        thetas.push_back(rows[r][0]);
        for (std::size_t c = 1; c < rows[r].size(); ++c) values.push_back(parse_number(rows[r][c], "loss matrix"));
    }
    return LossMatrix(std::move(thetas), std::move(decisions), std::move(values));
}

std::string loss_to_csv(const LossMatrix& loss) {
    std::string out = "theta";
    for (const auto& u : loss.decisions()) out += "," + u;
    out += '\n';
    for (std::size_t t = 0; t < loss.theta_count(); ++t) {
        out += loss.thetas().symbol(static_cast<SymbolIndex>(t));
        for (double v : loss.row(t)) out += "," + format_double(v);
        out += '\n';
    }
    return out;
}

std::string_view kind_name(CriterionKind kind) {
    switch (kind) {
        case CriterionKind::Minimax: return "minimax";
        case CriterionKind::Bayes: return "bayes";
        case CriterionKind::Regularity: return "regularity";
    }
    return "unknown";
}

Json to_json(const CriterionReport& report, const LossMatrix& loss) {
    Json j;
    j["kind"] = kind_name(report.kind);
    Json values = Json::object();
    for (std::size_t u = 0; u < report.values.size(); ++u) values[loss.decisions()[u]] = report.values[u];
    j["values"] = std::move(values);
    Json argmin = Json::array();
    for (std::size_t u : report.argmin) argmin.push_back(loss.decisions()[u]);
    j["argmin"] = std::move(argmin);
    if (report.kind == CriterionKind::Regularity) {
        Json worst = Json::object();
        for (std::size_t u = 0; u < report.worst_case.size(); ++u) worst[loss.decisions()[u]] = report.worst_case[u];
        j["worst_case"] = std::move(worst);
    }
    return j;
}

}  // namespace regula::io
