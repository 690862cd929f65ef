#include "qfluct/config.hpp"
#include "qfluct/matrixcore.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qfluct;

namespace {

KeyValueConfig parse(const std::string& text) {
  std::istringstream in(text);
  return KeyValueConfig::parse(in, "test.cfg");
}

std::string message_of(const std::string& text) {
  try {
    parse(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesValuesAndComments) {
  const KeyValueConfig c = parse("# header\nbeta = 2.5  # inline\n\nname = jc\nn = 7\nflag = true\nlist = 1, -2.5, 3e-1\n");
  EXPECT_DOUBLE_EQ(c.get_double("beta", 0.0), 2.5);
  EXPECT_EQ(c.get_string("name", ""), "jc");
  EXPECT_EQ(c.get_int("n", 0), 7);
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_EQ(c.get_doubles("list", {}), (std::vector<double>{1.0, -2.5, 0.3}));
  EXPECT_DOUBLE_EQ(c.get_double("missing", 4.0), 4.0);
  EXPECT_FALSE(c.has("missing"));
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_NE(message_of("a = 1\nno equals sign\n").find("test.cfg:2"), std::string::npos);
  EXPECT_NE(message_of("a = 1\nb = 2\n = 3\n").find("test.cfg:3"), std::string::npos);
}

TEST(Config, BadValueNamesKeyAndLine) {
  const KeyValueConfig c = parse("x = 1\nbeta = warm\n");
  try {
    c.get_double("beta", 1.0);
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("beta"), std::string::npos);
    EXPECT_NE(msg.find(":2"), std::string::npos);
  }
  EXPECT_THROW(parse("n = 2.5\n").get_int("n", 0), Error);
  EXPECT_THROW(parse("b = maybe\n").get_bool("b", false), Error);
}

TEST(Config, SetOverrides) {
  KeyValueConfig c = parse("a = 1\n");
  c.set("a", "2");
  EXPECT_EQ(c.get_int("a", 0), 2);
}

TEST(Config, MissingFile) { EXPECT_THROW(KeyValueConfig::load("/nonexistent/qfluct.cfg"), Error); }

TEST(Config, DuplicateKeyRejected) { EXPECT_NE(message_of("a = 1\na = 2\n").find("test.cfg:2"), std::string::npos); }
