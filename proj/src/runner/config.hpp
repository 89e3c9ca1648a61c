#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gwpdyn/linalg.hpp"

namespace gwp::runner {

/// Flat key = value configuration. Keys are dotted paths; values are
/// scalars or bracketed comma-separated lists. '#' starts a comment.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<text>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  const std::string& raw(const std::string& key) const;

  std::string str(const std::string& key) const;
  std::string str(const std::string& key, const std::string& fallback) const;
  double num(const std::string& key) const;
  double num(const std::string& key, double fallback) const;
  long integer(const std::string& key) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> nums(const std::string& key) const;
  std::vector<std::string> strs(const std::string& key) const;
  /// Vector of length n; a single number is broadcast.
  Vec vec(const std::string& key, int n) const;
  Vec vec(const std::string& key, int n, double fallback) const;

  /// Fails with a config error naming the first key never read.
  void require_all_used() const;

  std::string dump() const;
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace gwp::runner
