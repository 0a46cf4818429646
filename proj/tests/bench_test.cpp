#include "qpp/bench.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qpp;

TEST(Bench, ReportIsSelfConsistent) {
  BenchOptions options;
  options.buffer_bytes = 1 << 20;
  options.repeat = 1;
  options.handshake_iterations = 50;
  BenchReport report = run_bench(options);

  ASSERT_EQ(report.rows.size(), 4u);
  for (const auto& row : report.rows) {
    if (row.bytes == 0) continue;  // handshake row has no byte throughput
    EXPECT_GT(row.seconds, 0.0);
    EXPECT_NEAR(row.mb_per_s, row.bytes / (1024.0 * 1024.0) / row.seconds,
                row.mb_per_s * 1e-9);
  }

  double qpp_s = report.rows[0].seconds;
  double aes_s = report.rows[1].seconds;
  double nested_s = report.rows[2].seconds;
  EXPECT_GE(nested_s, std::max(qpp_s, aes_s) * 0.9);  // nested does strictly more work
  EXPECT_NEAR(report.qpp_vs_aes,
              report.rows[0].mb_per_s / report.rows[1].mb_per_s, 1e-9);
  EXPECT_NEAR(report.nested_vs_aes_only, nested_s / aes_s, 1e-9);
  EXPECT_GT(report.handshakes_per_second, 0.0);
}

TEST(Bench, CsvFormat) {
  BenchReport report;
  BenchRow row;
  row.name = "qpp_encrypt";
  row.bytes = 1048576;
  row.seconds = 0.5;
  row.mb_per_s = 2.0;
  report.rows.push_back(row);
  std::string csv = bench_csv(report);
  std::istringstream lines(csv);
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  EXPECT_EQ(header, "name,bytes,seconds,mb_per_s");
  EXPECT_EQ(first, "qpp_encrypt,1048576,0.5,2");
}

TEST(Bench, ThreadedEncryptMatchesBufferSize) {
  BenchOptions options;
  options.buffer_bytes = 1 << 20;
  options.repeat = 1;
  options.threads = 4;
  options.handshake_iterations = 10;
  BenchReport report = run_bench(options);
  EXPECT_EQ(report.rows[0].bytes, static_cast<uint64_t>(options.buffer_bytes));
}
