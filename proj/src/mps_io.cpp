#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "swapent/errors.hpp"
#include "swapent/mps.hpp"

namespace swapent {
namespace {

static_assert(sizeof(double) == 8);

void put_le_double(std::ostream& out, double x) {
  unsigned char bytes[8];
  std::memcpy(bytes, &x, 8);
  if constexpr (std::endian::native == std::endian::big) {
    for (int i = 0; i < 4; ++i) std::swap(bytes[i], bytes[7 - i]);
  }
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le_double(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("MPS1: truncated tensor data");
  if constexpr (std::endian::native == std::endian::big) {
    for (int i = 0; i < 4; ++i) std::swap(bytes[i], bytes[7 - i]);
  }
  double x;
  std::memcpy(&x, bytes, 8);
  return x;
}

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(std::string("MPS1: missing ") + what);
  return line;
}

}  // namespace

void write_mps1(std::ostream& out, const MatrixProductState& s) {
  s.validate();
  out << "MPS1 " << s.length() << '\n';
  for (const auto& t : s.sites) {
    out << t.extent(0) << ' ' << t.extent(1) << ' ' << t.extent(2) << '\n';
    for (double x : t.data()) put_le_double(out, x);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", s.log_norm);
  out << "lognorm " << buf << '\n';
  if (!out) throw IoError("MPS1: write failed");
}

MatrixProductState read_mps1(std::istream& in) {
  std::istringstream header(next_line(in, "header"));
  std::string magic;
  std::size_t n = 0;
  if (!(header >> magic >> n) || magic != "MPS1") throw IoError("MPS1: bad header");

  MatrixProductState s;
  s.sites.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::istringstream dims(next_line(in, "site header"));
    std::size_t dl = 0, d = 0, dr = 0;
    if (!(dims >> dl >> d >> dr) || d != kPhysDim || dl == 0 || dr == 0)
      throw IoError("MPS1: bad site header at site " + std::to_string(i));
    std::vector<double> data(dl * d * dr);
    for (double& x : data) x = get_le_double(in);
    s.sites.emplace_back(Shape{dl, d, dr}, std::move(data));
  }
  std::istringstream trailer(next_line(in, "lognorm line"));
  std::string key;
  if (!(trailer >> key >> s.log_norm) || key != "lognorm") throw IoError("MPS1: bad lognorm line");
  s.validate();
  return s;
}

void save_mps1(const std::string& path, const MatrixProductState& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_mps1(out, s);
}

MatrixProductState load_mps1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_mps1(in);
}

}  // namespace swapent
