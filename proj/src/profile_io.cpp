#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ttcore/profile.hpp"

namespace ttcore {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProfileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

long parse_int(std::string_view field, std::size_t line) {
  field = trim(field);
  long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ProfileError("line " + std::to_string(line) + ": not an integer: '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto comma = row.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(row.substr(start));
      break;
    }
    fields.push_back(row.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

void validate_parsed(const PreferenceProfile& p, const std::vector<std::size_t>& agent_line) {
  if (auto v = validate(p)) {
    std::string where;
    if (v->agent > 0 && v->agent <= agent_line.size()) {
      where = "line " + std::to_string(agent_line[v->agent - 1]) + ", ";
    }
    throw ProfileError(where + (v->agent ? "agent " + std::to_string(v->agent) + ": " : std::string()) + v->rule);
  }
}

}  // namespace

ProfileFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? ProfileFormat::csv : ProfileFormat::json;
}

std::string to_json_string(const PreferenceProfile& profile) {
  nlohmann::json j;
  j["n"] = profile.size();
  j["null_count"] = profile.null_count();
  j["prefs"] = nlohmann::json::array();
  for (const auto& list : profile.lists()) j["prefs"].push_back(list);
  return j.dump() + "\n";
}

// Header "agent,rank1,...,rankL" with L the longest list. A leading
// "# null_count=K" line is written only when the profile has null objects.
std::string to_csv_string(const PreferenceProfile& profile) {
  std::string out;
  if (profile.null_count() > 0) out += "# null_count=" + std::to_string(profile.null_count()) + "\n";
  out += "agent";
  for (std::size_t r = 1; r <= profile.max_list_length(); ++r) out += ",rank" + std::to_string(r);
  out += '\n';
  AgentId agent = 1;
  for (const auto& list : profile.lists()) {
    out += std::to_string(agent++);
    for (ObjectId o : list) out += "," + std::to_string(o);
    out += '\n';
  }
  return out;
}

PreferenceProfile parse_json(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ProfileError("no agents");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProfileError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("prefs") || !j["prefs"].is_array()) {
    throw ProfileError("JSON profile needs a \"prefs\" array");
  }
  const auto& prefs = j["prefs"];
  if (prefs.empty()) throw ProfileError("no agents");
  std::size_t n = prefs.size();
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<long>() < 1) throw ProfileError("\"n\" must be a positive integer");
    n = j["n"].get<std::size_t>();
  }
  std::size_t null_count = 0;
  if (j.contains("null_count")) {
    if (!j["null_count"].is_number_integer() || j["null_count"].get<long>() < 0)
      throw ProfileError("\"null_count\" must be a nonnegative integer");
    null_count = j["null_count"].get<std::size_t>();
  }
  std::vector<std::vector<ObjectId>> lists;
  for (std::size_t a = 0; a < prefs.size(); ++a) {
    const auto& row = prefs[a];
    if (!row.is_array()) throw ProfileError("agent " + std::to_string(a + 1) + ": preference list must be an array");
    std::vector<ObjectId> list;
    for (const auto& v : row) {
      if (!v.is_number_integer() || v.get<long>() < 1) {
        throw ProfileError("agent " + std::to_string(a + 1) + ": object ids must be positive integers");
      }
      list.push_back(v.get<ObjectId>());
    }
    lists.push_back(std::move(list));
  }
  PreferenceProfile p(n, std::move(lists), null_count);
  require_valid(p);
  return p;
}

PreferenceProfile parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::size_t null_count = 0;
  bool header_seen = false;
  std::vector<std::vector<ObjectId>> lists;
  std::vector<std::size_t> agent_line;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view key = "# null_count=";
      if (line.substr(0, key.size()) == key) {
        null_count = static_cast<std::size_t>(parse_int(line.substr(key.size()), line_no));
      }
      continue;
    }
    if (!header_seen) {
      if (trim(split(line).front()) != "agent") {
        throw ProfileError("line " + std::to_string(line_no) + ": expected header starting with 'agent'");
      }
      header_seen = true;
      continue;
    }
    auto fields = split(line);
    const long agent = parse_int(fields[0], line_no);
    if (agent != static_cast<long>(lists.size()) + 1) {
      throw ProfileError("line " + std::to_string(line_no) + ": expected agent " +
                         std::to_string(lists.size() + 1) + ", got " + std::to_string(agent));
    }
    std::vector<ObjectId> list;
    for (std::size_t f = 1; f < fields.size(); ++f) {
      if (trim(fields[f]).empty()) continue;
      const long o = parse_int(fields[f], line_no);
      if (o < 1) {
        throw ProfileError("line " + std::to_string(line_no) + ", agent " + std::to_string(agent) +
                           ": object id " + std::to_string(o) + " out of range");
      }
      list.push_back(static_cast<ObjectId>(o));
    }
    lists.push_back(std::move(list));
    agent_line.push_back(line_no);
  }
  if (lists.empty()) throw ProfileError("no agents");
  const std::size_t n = lists.size();
  PreferenceProfile p(n, std::move(lists), null_count);
  validate_parsed(p, agent_line);
  return p;
}

PreferenceProfile read_profile(const std::filesystem::path& path, ProfileFormat format) {
  const std::string text = read_file(path);
  return format == ProfileFormat::json ? parse_json(text) : parse_csv(text);
}

void write_profile(const PreferenceProfile& profile, const std::filesystem::path& path,
                   ProfileFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ProfileError("cannot write " + path.string());
  out << (format == ProfileFormat::json ? to_json_string(profile) : to_csv_string(profile));
  if (!out) throw ProfileError("write failed: " + path.string());
}

}  // namespace ttcore
