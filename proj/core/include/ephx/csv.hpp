#pragma once

#include <cstdio>
#include <initializer_list>
#include <string>
#include <type_traits>
#include <vector>

namespace ephx {

// Minimal CSV sink. Floats are written with 12 significant digits; comment lines start with '#'.
class CsvWriter {
public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void comment(const std::string& text);
  void header(std::initializer_list<std::string> cols);
  void header(const std::vector<std::string>& cols);

  template <typename... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    (put(vals, first), ...);
    std::fputc('\n', f_);
  }
  void row_values(const std::vector<double>& vals);

private:
  void sep(bool& first) {
    if (!first) std::fputc(',', f_);
    first = false;
  }
  void put(double v, bool& first);
  void put(int v, bool& first);
  void put(long v, bool& first);
  void put(long long v, bool& first);
  void put(std::size_t v, bool& first);
  void put(bool v, bool& first) { put(static_cast<int>(v), first); }
  void put(const std::string& v, bool& first);
  void put(const char* v, bool& first) { put(std::string(v), first); }

  std::FILE* f_ = nullptr;
};

std::string format_double(double v);

}  // namespace ephx
