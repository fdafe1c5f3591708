#include <charconv>
#include <istream>
#include <ostream>
#include <string>

#include "vofrac/errors.hpp"
#include "vofrac/grid.hpp"

namespace vofrac {

std::string format_real(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const GridFunction& f) {
  os << "offset,value\n";
  for (int k = f.lo(); k <= f.hi(); ++k) os << k << ',' << format_real(f[k]) << '\n';
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace

GridFunction read_csv(std::istream& is, const Grid& grid) {
  std::string line;
  std::vector<double> values;
  int first = -1;
  int expected = 0;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidArgument("csv line " + std::to_string(line_no) + ": expected 'offset,value'");
    }
    const std::string lhs = trim(line.substr(0, comma));
    const std::string rhs = trim(line.substr(comma + 1));
    int offset = 0;
    double value = 0.0;
    if (!parse_number(lhs, offset)) {
      if (values.empty() && first < 0 && lhs == "offset") continue;  // header
      throw InvalidArgument("csv line " + std::to_string(line_no) + ": bad offset '" + lhs + "'");
    }
    if (!parse_number(rhs, value)) {
      throw InvalidArgument("csv line " + std::to_string(line_no) + ": bad value '" + rhs + "'");
    }
    if (first < 0) {
      first = offset;
      expected = offset;
    }
    if (offset != expected) {
      throw InvalidArgument("csv line " + std::to_string(line_no) + ": offsets must be contiguous");
    }
    values.push_back(value);
    ++expected;
  }
  if (values.empty()) throw InvalidArgument("csv: no data rows");
  const int last = first + static_cast<int>(values.size()) - 1;
  return GridFunction(grid, first, last, std::move(values));
}

}  // namespace vofrac
