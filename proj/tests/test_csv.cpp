#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "ssa_autogroup/csv.hpp"

using namespace ssa_autogroup;

namespace {

class TempFile {
public:
    explicit TempFile(std::string_view content) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("ssa_csv_" + std::to_string(rd()) + ".csv");
        std::ofstream(path_, std::ios::binary) << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

ErrorKind load_error(const CsvSpec& spec) {
    try {
        (void)load_csv(spec);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidConfig;
}

} // namespace

TEST_CASE("record splitting") {
    using V = std::vector<std::string>;
    CHECK(split_csv_record("a,b,c", ',') == V{"a", "b", "c"});
    CHECK(split_csv_record("a,,c", ',') == V{"a", "", "c"});
    CHECK(split_csv_record(R"("x, y",2)", ',') == V{"x, y", "2"});
    CHECK(split_csv_record(R"("say ""hi""";3)", ';') == V{"say \"hi\"", "3"});
    CHECK(split_csv_record("", ',') == V{""});
}

TEST_CASE("read by column name and index") {
    const TempFile f("d,v\na,1\nb,2\nc,3\n");
    CsvSpec spec{f.path(), "v"};
    const auto col = read_csv_column(spec);
    CHECK(col.values == std::vector<double>{1, 2, 3});
    CHECK(col.labels.empty());

    spec.value_column = "1";
    spec.label_column = "d";
    const auto labelled = read_csv_column(spec);
    CHECK(labelled.values == std::vector<double>{1, 2, 3});
    CHECK(labelled.labels == std::vector<std::string>{"a", "b", "c"});

    const TempFile four("d,v\na,1\nb,2\nc,3\nd,4\n");
    const auto series = load_csv({four.path(), "v", "d"});
    CHECK(series.values() == Eigen::Vector4d(1, 2, 3, 4));
    CHECK(series.labels().back() == "d");
}

TEST_CASE("windows line endings, blank lines, quoting and other delimiters") {
    const TempFile crlf("date;count\r\n2022-01-01;10.5\r\n\r\n\"2022-01-02\";-3e2\r\n2022-01-03; 7 \r\n");
    CsvSpec spec{crlf.path(), "count", "date", ';'};
    const auto col = read_csv_column(spec);
    CHECK(col.values == std::vector<double>{10.5, -300, 7});
    CHECK(col.labels[1] == "2022-01-02");

    const TempFile bare("4\n5\n6\n7\n");
    CsvSpec headerless{bare.path(), "0"};
    headerless.header = false;
    CHECK(load_csv(headerless).size() == 4);
}

TEST_CASE("load errors") {
    CHECK(load_error({"/nonexistent/dir/series.csv", "v"}) == ErrorKind::FileNotFound);

    const TempFile bad("d,v\na,1\nb,x\nc,3\nd,4\n");
    try {
        (void)load_csv({bad.path(), "v"});
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    const TempFile nan("v\n1\nnan\n2\n3\n");
    CHECK(load_error({nan.path(), "v"}) == ErrorKind::ParseError);
    const TempFile inf("v\n1\ninf\n2\n3\n");
    CHECK(load_error({inf.path(), "v"}) == ErrorKind::ParseError);
    const TempFile short_row("a,v\n1,2\n3\n4,5\n6,7\n");
    CHECK(load_error({short_row.path(), "v"}) == ErrorKind::ParseError);

    const TempFile header_only("d,v\n");
    CHECK(load_error({header_only.path(), "v"}) == ErrorKind::EmptySeries);
    const TempFile tiny("v\n1\n2\n3\n");
    CHECK(load_error({tiny.path(), "v"}) == ErrorKind::WindowOutOfRange);

    const TempFile ok("d,v\na,1\nb,2\nc,3\nd,4\n");
    CHECK(load_error({ok.path(), "missing"}) == ErrorKind::ParseError);
}

TEST_CASE("output formatting") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(2.0) == "2");
    CHECK(format_real(-1.5e-300) == "-1.5000000000000001e-300");
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);

    Eigen::Matrix2d m;
    m << 1, 0.5, 0.5, 1;
    CHECK(matrix_csv(m) == "1,0.5\n0.5,1\n");

    const Eigen::Vector2d y(3, 4);
    const Eigen::Vector2d s(2.5, 4.5);
    const Eigen::Vector2d r = y - s;
    CHECK(reconstruction_csv(y, s, r) == "t,original,signal,residual\n1,3,2.5,0.5\n2,4,4.5,-0.5\n");
    CHECK(reconstruction_csv(y, s, r, {"mon", "tue"}).find("\ntue,4,") != std::string::npos);
    CHECK_THROWS_AS((void)reconstruction_csv(y, s, Eigen::Vector3d::Zero()), Error);
}
