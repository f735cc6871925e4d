#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

#include <gtest/gtest.h>

#include "lcf/driver/csv.hpp"
#include "lcf/error.hpp"

using namespace lcf;
using namespace lcf::driver;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "lcf_csv_test";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

}  // namespace

TEST(Csv, EmptyHistoryCreatesNoFile) {
  Table t;
  t.columns = {"a", "b"};
  const auto p = scratch("empty.csv");
  EXPECT_THROW(emit_csv(t, p), Error);
  EXPECT_FALSE(fs::exists(p));
}

TEST(Csv, SingleRowTwoLines) {
  Table t;
  t.columns = {"step", "stress"};
  t.add_row({1.0, 215.5});
  const auto p = scratch("one.csv");
  emit_csv(t, p);
  EXPECT_EQ(slurp(p), "step,stress\n1,215.5\n");
}

TEST(Csv, RoundTripIsBitExact) {
  Table t;
  t.columns = {"x", "y", "z"};
  t.add_row({0.1, 1.0 / 3.0, -2.5e-300});
  t.add_row({std::nextafter(1.0, 2.0), 123456789.123456789, std::numeric_limits<double>::denorm_min()});
  t.add_row({-0.0, 6.02214076e23, std::numeric_limits<double>::max()});
  const auto p = scratch("roundtrip.csv");
  emit_csv(t, p);
  const Table back = read_csv(p);
  EXPECT_EQ(back.columns, t.columns);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    for (std::size_t c = 0; c < 3; ++c)
      EXPECT_EQ(std::memcmp(&back.rows[r][c], &t.rows[r][c], sizeof(double)), 0) << r << "," << c;
}

TEST(Csv, IgnoresGlobalLocale) {
  Table t;
  t.columns = {"v"};
  t.add_row({1234.5});
  std::ostringstream plain;
  write_csv(plain, t);
  const std::locale old = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  std::ostringstream localized;
  localized.imbue(std::locale());
  write_csv(localized, t);
  std::locale::global(old);
  EXPECT_EQ(plain.str(), localized.str());
  EXPECT_EQ(plain.str(), "v\n1234.5\n");
}

TEST(Csv, DeterministicBytes) {
  Table t;
  t.columns = {"a"};
  for (int i = 0; i < 100; ++i) t.add_row({std::sin(i * 0.37)});
  const auto a = scratch("det_a.csv");
  const auto b = scratch("det_b.csv");
  emit_csv(t, a);
  emit_csv(t, b);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Csv, IoFailureNamesPath) {
  Table t;
  t.columns = {"a"};
  t.add_row({1.0});
  const fs::path bad = fs::temp_directory_path() / "lcf_no_such_dir" / "x.csv";
  try {
    emit_csv(t, bad);
    FAIL() << "expected failure";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
  }
}

TEST(Csv, RowWidthChecked) {
  Table t;
  t.columns = {"a", "b"};
  EXPECT_THROW(t.add_row({1.0}), ContractViolation);
  EXPECT_EQ(t.column("b"), 1u);
  EXPECT_THROW(t.column("c"), ContractViolation);
}
