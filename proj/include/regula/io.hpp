#pragma once
// File formats.
//
//   regularity     {"alphabet": [...], "convex": bool, "measures": [[w...], ...]}
//   sampling net   JSON lines; an optional header {"alphabet": [...], "meta": {...}}
//                  followed by one {"lambda", "round", "target", "tuple"} per item
//   sequence       {"alphabet": [...], "symbols": [...], "meta": {...}}
//   trajectory     CSV, header index,dim0,dim1,...
//   estimate       {"epsilon", "windows", "centers", "visits"}
//   loss matrix    CSV; first row decision labels, first column theta labels
//   report         {"kind", "values": {u: v}, "argmin": [...], "worst_case": {u: [...]}}
//
// Readers throw DataError on malformed content.

#include <filesystem>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"
#include "regula/decision.hpp"
#include "regula/empirics.hpp"
#include "regula/measure.hpp"
#include "regula/realization.hpp"

namespace regula::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that round-trips.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
Json parse_json(const std::string& text, const std::string& what);

Alphabet alphabet_from_json(const Json& j);
Json to_json(const Alphabet& alphabet);

/// Either {"alphabet": [...], "weights": [...]} or a bare weight array
/// over `fallback`.
Measure measure_from_json(const Json& j, const std::optional<Alphabet>& fallback = std::nullopt);

Regularity regularity_from_json(const Json& j);
Json to_json(const Regularity& regularity);

Json to_json(const GeneratorMeta& meta);
GeneratorMeta meta_from_json(const Json& j);
RealizationSchedule schedule_from_json(const Json& j);
Json to_json(const RealizationSchedule& schedule);

std::string net_to_jsonl(const SamplingNet& net);
/// Without a header line the alphabet is `alphabet` if given, otherwise the
/// symbols in order of first appearance.
SamplingNet net_from_jsonl(const std::string& text, const std::optional<Alphabet>& alphabet = std::nullopt);

std::string sequence_to_json(const SymbolSequence& sequence);
SymbolSequence sequence_from_json(const std::string& text, const std::optional<Alphabet>& alphabet = std::nullopt);

using Stream = std::variant<SamplingNet, SymbolSequence>;
/// Distinguishes a net file from a sequence file by content.
Stream stream_from_text(const std::string& text, const std::optional<Alphabet>& alphabet = std::nullopt);

std::string trajectory_to_csv(const Trajectory& trajectory);
Json to_json(const LimitSetEstimate& estimate);

LossMatrix loss_from_csv(const std::string& text);
std::string loss_to_csv(const LossMatrix& loss);

std::string_view kind_name(CriterionKind kind);
Json to_json(const CriterionReport& report, const LossMatrix& loss);

}  // namespace regula::io
