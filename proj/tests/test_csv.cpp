#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hbm/csv.hpp"

using namespace hbm;

TEST_CASE("number formatting round-trips bit-exactly") {
    for (double v : {0.0, 1.0, -1.0 / 3.0, 3.141592653589793, 1e-17, -2.5e300, 0.1}) {
        const std::string s = csv_number(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("header-only output") {
    std::ostringstream os;
    write_csv(os, {"a", "b"}, {});
    CHECK(os.str() == "a,b\r\n");
}

TEST_CASE("quoting rules") {
    std::ostringstream os;
    write_csv(os, {"name", "value"}, {{"plain", "1"}, {"with,comma", "2"}, {"with\"quote", "3"}});
    const std::string text = os.str();
    CHECK(text.find("\"with,comma\"") != std::string::npos);
    CHECK(text.find("\"with\"\"quote\"") != std::string::npos);
    CHECK(text.find("plain,1\r\n") != std::string::npos);
}

TEST_CASE("file round trip is deterministic") {
    const std::string path = "test_csv_roundtrip.tmp.csv";
    const std::vector<std::string> header = {"x", "y"};
    const std::vector<std::vector<std::string>> rows = {
        {csv_number(1.0 / 3.0), csv_number(-2.718281828459045)},
        {csv_number(1e-300), csv_number(0.0)}};
    write_csv_file(path, header, rows);
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string first = buf.str();
    write_csv_file(path, header, rows);
    std::ifstream in2(path, std::ios::binary);
    std::stringstream buf2;
    buf2 << in2.rdbuf();
    CHECK(first == buf2.str());
    // Re-parse the numeric cells bit-exactly.
    std::istringstream lines(first);
    std::string line;
    std::getline(lines, line);  // header
    std::getline(lines, line);
    const auto comma = line.find(',');
    CHECK(std::stod(line.substr(0, comma)) == 1.0 / 3.0);
    std::remove(path.c_str());
}

TEST_CASE("unwritable path throws") {
    CHECK_THROWS(write_csv_file("/nonexistent-dir/x.csv", {"a"}, {}));
}
