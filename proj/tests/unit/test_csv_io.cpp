#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "relscan/csv_io.hpp"
#include "relscan/errors.hpp"

using namespace relscan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("relscan-csv-test-" + std::to_string(std::rand()) +
                std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

fs::path write_file(const TempDir& dir, const std::string& name, const std::string& body) {
    const fs::path p = dir.path / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p;
}

}  // namespace

TEST_CASE("reads one value per row, with or without a header") {
    TempDir dir;
    const TimeSeries plain =
        read_series_csv(write_file(dir, "plain.csv", "1.5\n-2\n3e2\n"));
    CHECK(plain == TimeSeries{1.5, -2.0, 300.0});

    const TimeSeries headed =
        read_series_csv(write_file(dir, "headed.csv", "value\n1.5\n-2\n3e2\n"));
    CHECK(headed == plain);

    // whitespace around cells and CRLF endings are tolerated
    const TimeSeries padded =
        read_series_csv(write_file(dir, "padded.csv", " 1.5 \r\n\t-2\r\n3e2\r\n"));
    CHECK(padded == plain);

    // a single trailing blank line is fine
    const TimeSeries trailing =
        read_series_csv(write_file(dir, "trailing.csv", "1\n2\n\n"));
    CHECK(trailing == TimeSeries{1.0, 2.0});
}

TEST_CASE("malformed input errors carry the row number") {
    TempDir dir;
    const fs::path bad = write_file(dir, "bad.csv", "1\n2\nxyz\n4\n");
    CHECK_THROWS_WITH_AS(read_series_csv(bad), doctest::Contains("row 3"), invalid_input);

    const fs::path nan = write_file(dir, "nan.csv", "1\nnan\n3\n");
    CHECK_THROWS_WITH_AS(read_series_csv(nan), doctest::Contains("row 2"), invalid_input);

    const fs::path inf = write_file(dir, "inf.csv", "inf\n");
    CHECK_THROWS_AS(read_series_csv(inf), invalid_input);

    // a blank row in the middle is an error, not a terminator
    const fs::path gap = write_file(dir, "gap.csv", "1\n\n3\n");
    CHECK_THROWS_WITH_AS(read_series_csv(gap), doctest::Contains("row 2"), invalid_input);

    CHECK_THROWS_AS(read_series_csv(write_file(dir, "empty.csv", "")), invalid_input);
    CHECK_THROWS_AS(read_series_csv(write_file(dir, "onlyheader.csv", "value\n")),
                    invalid_input);
    CHECK_THROWS_AS(read_series_csv(dir.path / "does-not-exist.csv"), invalid_input);
}

TEST_CASE("atomic write leaves exactly the final content and no temp file") {
    TempDir dir;
    const fs::path target = dir.path / "out.txt";
    atomic_write_text(target, "first\n");
    atomic_write_text(target, "second\n");

    std::ifstream in(target, std::ios::binary);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(body == "second\n");
    CHECK(!fs::exists(dir.path / "out.txt.tmp"));
}

TEST_CASE("formatted values round-trip") {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 12345.6789, 1e-12, 9.87654321e17}) {
        const std::string s = format_value(v);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == doctest::Approx(v).epsilon(1e-14));
    }
    CHECK(format_value(2.0) == "2");
    CHECK(format_value(0.5) == "0.5");
}
