#include "graphpde/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace graphpde {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string series_to_csv(const TimeSeries& s, const std::vector<VertexId>& ids) {
  std::ostringstream out;
  out << "t";
  for (const auto& id : ids) out << "," << id;
  out << "\n";
  for (int m = 0; m < s.size(); ++m) {
    out << format_g17(s.times[m]);
    for (size_t x = 0; x < ids.size(); ++x) out << "," << format_g17(s.states[m][x]);
    out << "\n";
  }
  return out.str();
}

std::string series_to_plot(const TimeSeries& s, const std::vector<VertexId>& ids) {
  std::ostringstream out;
  for (size_t x = 0; x < ids.size(); ++x) {
    if (x > 0) out << "\n";
    out << "# " << ids[x] << "\n";
    for (int m = 0; m < s.size(); ++m)
      out << format_g17(s.times[m]) << " " << format_g17(s.states[m][x]) << "\n";
  }
  return out.str();
}

namespace {

std::string trim_ws(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim_ws(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim_ws(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ParseError(origin + ":" + std::to_string(lineno) + ": empty section name");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
    const std::string key = trim_ws(line.substr(0, eq));
    const std::string val = trim_ws(line.substr(eq + 1));
    if (key.empty())
      throw ParseError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ParseError(origin + ":" + std::to_string(lineno) + ": key outside of a section");
    cfg.sections_[section][key] = val;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return fallback;
  auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

std::string Config::require_string(const std::string& section, const std::string& key) const {
  if (!has(section, key))
    throw ParseError(origin_ + ": missing required key [" + section + "] " + key);
  return sections_.at(section).at(key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = sections_.at(section).at(key);
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError(origin_ + ": [" + section + "] " + key + ": not a number: `" + v + "`");
  }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = sections_.at(section).at(key);
  try {
    size_t used = 0;
    const int d = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError(origin_ + ": [" + section + "] " + key + ": not an integer: `" + v + "`");
  }
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key) const {
  std::vector<double> out;
  if (!has(section, key)) return out;
  const std::string v = sections_.at(section).at(key);
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim_ws(item);
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ParseError(origin_ + ": [" + section + "] " + key + ": not a number: `" + item + "`");
    }
  }
  return out;
}

}  // namespace graphpde
