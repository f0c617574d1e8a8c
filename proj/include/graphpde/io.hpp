#pragma once

#include <map>
#include <string>
#include <vector>

#include "graphpde/linear_solvers.hpp"

namespace graphpde {

// shortest-faithful decimal with 17 significant digits
std::string format_g17(double v);

// temp-file-then-rename write
void write_text_atomic(const std::string& path, const std::string& content);

// CSV trajectory: header `t,<vertex ids…>`, one row per grid time
std::string series_to_csv(const TimeSeries& s, const std::vector<VertexId>& ids);

// gnuplot-ready: per vertex a `# id` header and `t value` rows, blocks
// separated by blank lines
std::string series_to_plot(const TimeSeries& s, const std::vector<VertexId>& ids);

// Key-value config with one level of [section] nesting; `#` comments.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<string>");
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  // comma-separated list of reals
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string origin_;
};

}  // namespace graphpde
