#include <gtest/gtest.h>

#include "kofn/errors.hpp"
#include "report_io.hpp"

namespace kofn::cli {
namespace {

TEST(ReportIo, ParseRational) {
  EXPECT_EQ(parse_rational("3/8"), Rational(3, 8));
  EXPECT_EQ(parse_rational("6/16"), Rational(3, 8));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_EQ(parse_rational("20"), Rational(20));
  EXPECT_EQ(parse_rational("-0.5"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("010"), Rational(10));
  EXPECT_EQ(parse_rational("0.0625"), Rational(1, 16));
  EXPECT_THROW(parse_rational("abc"), DomainError);
  EXPECT_THROW(parse_rational("1/0"), DomainError);
}

TEST(ReportIo, RationalJsonRoundTrip) {
  const Rational r("-123456789012345678901234567891/7");
  const auto j = rational_json(r);
  EXPECT_EQ(j.at("num"), "-123456789012345678901234567891");
  EXPECT_EQ(j.at("den"), "7");
  EXPECT_EQ(rational_from_json(j), r);
}

TEST(ReportIo, DoublesRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(ReportIo, CsvQuoting) {
  CsvTable t({"name", "value"});
  t.row() << "plain" << 1;
  t.row() << "with,comma" << 2.5;
  t.row() << "say \"hi\"" << Rational(1, 3);
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.text(), "name,value\nplain,1\n\"with,comma\",2.5\n\"say \"\"hi\"\"\",1/3\n");
  EXPECT_THROW(t.row() << "only one cell", std::logic_error);
}

TEST(ReportIo, DigestIsFnv1a) {
  EXPECT_EQ(content_digest(""), "cbf29ce484222325");
  EXPECT_EQ(content_digest("a"), "af63dc4c8601ec8c");
  EXPECT_NE(content_digest("ab"), content_digest("ba"));
}

}  // namespace
}  // namespace kofn::cli
