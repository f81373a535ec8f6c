#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "motioneval/error.hpp"
#include "motioneval/io.hpp"
#include "motioneval/normalize.hpp"

#include "test_util.hpp"

using namespace motioneval;

namespace {

// Digital design frozen from an independent filter-design oracle for
// order 4, cutoff 0.05 x Nyquist.
constexpr double kRefB[5] = {3.1238976917082617e-05, 0.00012495590766833047,
                             0.0001874338615024957, 0.00012495590766833047,
                             3.1238976917082617e-05};
constexpr double kRefA[5] = {1.0, -3.5897338871121756, 4.8512758825194169,
                             -2.9240526561624587, 0.66301048438589105};
constexpr double kRefZi[4] = {0.9999687610233805, -2.5898900819975315,
                              2.2611983666618252, -0.66297924540917119};

struct ReferenceChannel {
    std::uint64_t seed;
    std::size_t length;
    std::vector<double> values;
};

std::vector<ReferenceChannel> load_reference_channels() {
    const std::string text = read_file(testutil::data_path("lowpass_reference.csv"));
    std::vector<ReferenceChannel> rows;
    std::size_t start = 0;
    bool header = true;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos)
            end = text.size();
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty())
            continue;
        if (header) {
            header = false;
            continue;
        }
        ReferenceChannel row;
        std::size_t pos = 0;
        int field = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            if (comma == std::string::npos)
                comma = line.size();
            const std::string token = line.substr(pos, comma - pos);
            if (field == 0)
                row.seed = std::stoull(token);
            else if (field == 1)
                row.length = std::stoull(token);
            else
                row.values.push_back(std::stod(token));
            ++field;
            pos = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

TEST_CASE("butterworth design matches the frozen coefficients") {
    const FilterCoeffs coeffs = butterworth_lowpass(4, 0.05);
    REQUIRE(coeffs.b.size() == 5);
    REQUIRE(coeffs.a.size() == 5);
    CHECK(coeffs.a[0] == 1.0);
    for (int i = 0; i < 5; ++i) {
        CHECK(coeffs.b[static_cast<std::size_t>(i)] ==
              doctest::Approx(kRefB[i]).epsilon(1e-13));
        CHECK(coeffs.a[static_cast<std::size_t>(i)] ==
              doctest::Approx(kRefA[i]).epsilon(1e-13));
    }
}

TEST_CASE("unit-step steady state matches the frozen values") {
    const std::vector<double> zi = unit_step_state(butterworth_lowpass(4, 0.05));
    REQUIRE(zi.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(zi[static_cast<std::size_t>(i)] ==
              doctest::Approx(kRefZi[i]).epsilon(1e-13));
}

TEST_CASE("butterworth design rejects bad parameters") {
    CHECK_THROWS_AS(butterworth_lowpass(0, 0.05), ValidationError);
    CHECK_THROWS_AS(butterworth_lowpass(4, 0.0), ValidationError);
    CHECK_THROWS_AS(butterworth_lowpass(4, 1.0), ValidationError);
}

TEST_CASE("zero-phase filter matches the frozen oracle channels") {
    const std::vector<ReferenceChannel> rows = load_reference_channels();
    REQUIRE(rows.size() == 20);
    for (const ReferenceChannel& row : rows) {
        CAPTURE(row.seed);
        REQUIRE(row.values.size() == row.length);
        std::vector<double> x = testutil::uniforms(row.seed, row.length);
        for (double& v : x)
            v = 2.0 * v - 1.0;
        const std::vector<double> y = lowpass_zero_phase_channel(x, 0.05, 4);
        REQUIRE(y.size() == row.length);
        double worst = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            worst = std::max(worst, std::abs(y[i] - row.values[i]));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("constants pass through the zero-phase filter") {
    const std::vector<double> x(256, 3.25);
    const std::vector<double> y = lowpass_zero_phase_channel(x, 0.05, 4);
    double worst = 0.0;
    for (double v : y)
        worst = std::max(worst, std::abs(v - 3.25));
    CHECK(worst <= 1e-9);
}

TEST_CASE("zero-phase filtering commutes exactly with time reversal") {
    std::vector<double> x = testutil::uniforms(1234, 200);
    for (double& v : x)
        v = 2.0 * v - 1.0;
    const std::vector<double> forward = lowpass_zero_phase_channel(x, 0.05, 4);
    std::vector<double> reversed(x.rbegin(), x.rend());
    const std::vector<double> backward = lowpass_zero_phase_channel(reversed, 0.05, 4);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(forward[i] == backward[x.size() - 1 - i]);
}

TEST_CASE("short series are handled by shrinking the edge extension") {
    std::vector<double> x = testutil::uniforms(77, 9);
    for (double& v : x)
        v = 2.0 * v - 1.0;
    CHECK(lowpass_zero_phase_channel(x, 0.05, 4).size() == 9);
    CHECK_THROWS_AS(lowpass_zero_phase_channel(std::vector<double>{1.0}, 0.05, 4),
                    ValidationError);
    CHECK_THROWS_AS(lowpass_zero_phase_channel(std::vector<double>{}, 0.05, 4),
                    ValidationError);
}

TEST_CASE("a zero channel stays exactly zero") {
    const std::vector<double> x(64, 0.0);
    for (double v : lowpass_zero_phase_channel(x, 0.05, 4))
        CHECK(v == 0.0);
}
