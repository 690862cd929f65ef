#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qfluct {

// Flat "key = value" file; '#' starts a comment. Errors carry the source line.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<config>");
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  void set(const std::string& key, const std::string& value);
  const std::string& source() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace qfluct
