#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "pdwave/io.hpp"

using namespace pdwave;

TEST_CASE("sha1 known vectors", "[io]") {
  CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "84983e441c3bd26ebaae4aa1f95129e5e54670f1");
}

TEST_CASE("git blob hash matches git's convention", "[io]") {
  // `echo 'hello' | git hash-object --stdin`
  CHECK(git_blob_sha1("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("g17 formatting round-trips doubles", "[io]") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 3.14159265358979323846}) {
    const std::string s = format_g17(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("csv layout", "[io]") {
  Csv csv;
  csv.meta("alpha", 1.5);
  csv.meta("label", std::string("x"));
  csv.columns({"a", "b"});
  csv.row().cell(1).cell(0.5);
  csv.row().cell(2).cell(std::string("z"));
  const std::string text = csv.str();
  CHECK(text == "# alpha = 1.5\n# label = x\na,b\n1,0.5\n2,z\n");
}
