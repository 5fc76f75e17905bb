// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/question.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "kmr/errors.hpp"
#include "kmr/version.hpp"

namespace kmr {

const char* to_string(Subset subset) { return subset == Subset::date ? "date" : "zodiac"; }

Subset subset_from_string(const std::string& s) {
  if (s == "date") return Subset::date;
  if (s == "zodiac") return Subset::zodiac;
  throw ParseError("unknown subset: " + s);
}

bool value_equal(const StepValue& a, const StepValue& b) { return a == b; }

std::string render_value(const StepValue& v) {
  struct Renderer {
    std::string operator()(int64_t n) const { return std::to_string(n); }
    std::string operator()(const CalendarDate& d) const { return format_date(d); }
    std::string operator()(const ZodiacSign& s) const { return s.name_ko + " (" + s.name_en + ")"; }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Renderer{}, v);
}

nlohmann::ordered_json value_to_json(const StepValue& v) {
  struct Writer {
    nlohmann::ordered_json operator()(int64_t n) const {
      return {{"kind", "int"}, {"value", n}};
    }
    nlohmann::ordered_json operator()(const CalendarDate& d) const {
      return {{"kind", "date"},       {"calendar", to_string(d.kind)}, {"year", d.year},
              {"month", d.month},     {"day", d.day},                  {"leap_month", d.leap_month}};
    }
    nlohmann::ordered_json operator()(const ZodiacSign& s) const {
      return {{"kind", "sign"}, {"index", s.index}, {"name_ko", s.name_ko}, {"name_en", s.name_en}};
    }
    nlohmann::ordered_json operator()(const std::string& s) const {
      return {{"kind", "text"}, {"value", s}};
    }
  };
  return std::visit(Writer{}, v);
}

StepValue value_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "int") return j.at("value").get<int64_t>();
  if (kind == "date") {
    CalendarDate d;
    d.kind = calendar_kind_from_string(j.at("calendar").get<std::string>());
    d.year = j.at("year").get<int>();
    d.month = j.at("month").get<int>();
    d.day = j.at("day").get<int>();
    d.leap_month = j.at("leap_month").get<bool>();
    return d;
  }
  if (kind == "sign") {
    const int index = j.at("index").get<int>();
    if (index < 0 || index > 11) throw ParseError("sign index out of range");
    ZodiacSign sign = zodiac_cycle()[static_cast<size_t>(index)];
    if (j.at("name_ko").get<std::string>() != sign.name_ko ||
        j.at("name_en").get<std::string>() != sign.name_en)
      throw ParseError("sign names inconsistent with index " + std::to_string(index));
    return sign;
  }
  if (kind == "text") return j.at("value").get<std::string>();
  throw ParseError("unknown value kind: " + kind);
}

std::string make_instance_id(Subset subset, const std::string& version, uint64_t seed) {
  return std::string(to_string(subset)) + "-" + version + "-" + std::to_string(seed);
}

nlohmann::ordered_json instance_to_json(const QuestionInstance& q) {
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : q.gold.steps) {
    steps.push_back({{"index", s.index},
                     {"label", s.label},
                     {"text", s.text},
                     {"value", value_to_json(s.value)}});
  }
  return {{"record", "instance"},
          {"id", q.id},
          {"subset", to_string(q.subset)},
          {"seed", q.seed},
          {"generator_version", q.generator_version},
          {"question_ko", q.question_ko},
          {"question_en", q.question_en},
          {"params", q.params},
          {"gold", {{"steps", steps}}},
          {"answer", value_to_json(q.answer)}};
}

QuestionInstance instance_from_json(const nlohmann::ordered_json& j) {
  QuestionInstance q;
  q.id = j.at("id").get<std::string>();
  q.subset = subset_from_string(j.at("subset").get<std::string>());
  q.seed = j.at("seed").get<uint64_t>();
  q.generator_version = j.at("generator_version").get<std::string>();
  q.question_ko = j.at("question_ko").get<std::string>();
  q.question_en = j.at("question_en").get<std::string>();
  q.params = j.at("params");
  for (const auto& s : j.at("gold").at("steps")) {
    TraceStep step;
    step.index = s.at("index").get<int>();
    step.label = s.at("label").get<std::string>();
    step.text = s.at("text").get<std::string>();
    step.value = value_from_json(s.at("value"));
    q.gold.steps.push_back(std::move(step));
  }
  if (q.gold.steps.empty()) throw ParseError("instance " + q.id + " has an empty gold trace");
  q.answer = value_from_json(j.at("answer"));
  return q;
}

std::string instance_to_line(const QuestionInstance& q) { return instance_to_json(q).dump(); }

std::string gold_block(const QuestionInstance& q) {
  std::string out;
  for (const auto& s : q.gold.steps) {
    if (!out.empty()) out += '\n';
    out += "STEP " + std::to_string(s.index) + ": " + s.text;
  }
  return out;
}

std::vector<const QuestionInstance*> BenchmarkRelease::all() const {
  std::vector<const QuestionInstance*> out;
  out.reserve(date_instances.size() + zodiac_instances.size());
  for (const auto& q : date_instances) out.push_back(&q);
  for (const auto& q : zodiac_instances) out.push_back(&q);
  return out;
}

const QuestionInstance* BenchmarkRelease::find(const std::string& id) const {
  for (const auto* q : all()) {
    if (q->id == id) return q;
  }
  return nullptr;
}

const QuestionInstance* BenchmarkRelease::find_by_question(const std::string& question_ko) const {
  for (const auto* q : all()) {
    if (q->question_ko == question_ko) return q;
  }
  return nullptr;
}

std::string serialize_release(const BenchmarkRelease& release) {
  nlohmann::ordered_json header = {{"record", "header"},
                                   {"schema_version", kSchemaVersion},
                                   {"generator_version", release.generator_version},
                                   {"release_id", release.release_id},
                                   {"created_at", release.created_at},
                                   {"manifest_hash", release.manifest_hash},
                                   {"count_date", release.date_instances.size()},
                                   {"count_zodiac", release.zodiac_instances.size()}};
  std::string out = header.dump();
  out += '\n';
  for (const auto* q : release.all()) {
    out += instance_to_line(*q);
    out += '\n';
  }
  return out;
}

BenchmarkRelease parse_release(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  BenchmarkRelease release;
  std::set<std::string> ids;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    const std::string record = j.value("record", "");
    if (line_no == 1) {
      if (record != "header") throw ParseError("first line must be the release header", line_no);
      if (j.at("schema_version").get<std::string>() != kSchemaVersion)
        throw ParseError("unsupported schema version", line_no);
      release.release_id = j.at("release_id").get<std::string>();
      release.generator_version = j.at("generator_version").get<std::string>();
      release.created_at = j.at("created_at").get<std::string>();
      release.manifest_hash = j.value("manifest_hash", "");
      continue;
    }
    if (record != "instance") throw ParseError("expected an instance record", line_no);
    QuestionInstance q;
    try {
      q = instance_from_json(j);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("bad instance record: ") + e.what(), line_no);
    }
    if (!ids.insert(q.id).second) throw ParseError("duplicate instance id " + q.id, line_no);
    (q.subset == Subset::date ? release.date_instances : release.zodiac_instances)
        .push_back(std::move(q));
  }
  if (release.release_id.empty()) throw ParseError("release has no header line");
  return release;
}

void write_release(const std::string& path, const BenchmarkRelease& release) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write release file: " + path);
  out << serialize_release(release);
}

BenchmarkRelease read_release(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open release file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_release(buf.str());
}

std::string utc_timestamp() {
  std::time_t now;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    now = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
  } else {
    now = std::time(nullptr);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace kmr
