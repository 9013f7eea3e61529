#include <gtest/gtest.h>

#include <string>

#include "ifem/config.hpp"
#include "ifem/exceptions.hpp"
#include "ifem/parallel.hpp"
#include "ifem/report.hpp"

using namespace ifem;

TEST(Config, ParsesKeyValues) {
  const Config c = Config::parse("# comment\ntheta = 0.3\nmax_dof=1000 # trailing\nproblem = ex53\nflag = true\n");
  EXPECT_EQ(c.get_double("theta", 0.2), 0.3);
  EXPECT_EQ(c.get_int("max_dof", 0), 1000);
  EXPECT_EQ(c.get_string("problem", ""), "ex53");
  EXPECT_TRUE(c.get_bool("flag", false));
  EXPECT_EQ(c.get_double("missing", 1.5), 1.5);
  EXPECT_FALSE(c.has("missing"));
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(Config::parse("no equals sign\n"), Error);
  EXPECT_THROW(Config::parse("theta = abc\n").get_double("theta", 0), Error);
}

TEST(Report, UniformCsvLayout) {
  std::vector<ErrorRecord> recs(2);
  recs[0].dof = 100;
  recs[0].De = recs[0].Die = recs[0].Dre = recs[0].Dpe = 1e-2;
  recs[1].dof = 400;
  recs[1].De = recs[1].Die = recs[1].Dre = recs[1].Dpe = 2.5e-3;
  const std::string csv = uniform_csv(recs);
  EXPECT_EQ(csv,
            "dof,De,De_order,Die,Die_order,Dre,Dre_order,Dpe,Dpe_order\n"
            "100,1.00e-02,--,1.00e-02,--,1.00e-02,--,1.00e-02,--\n"
            "400,2.50e-03,1.00,2.50e-03,1.00,2.50e-03,1.00,2.50e-03,1.00\n");
}

TEST(Report, AdaptiveCsvLayout) {
  std::vector<ErrorRecord> recs(1);
  recs[0].dof = 25;
  recs[0].energy_error = 2.0;
  recs[0].eta = 1.0;
  recs[0].kappa = 0.5;
  EXPECT_EQ(adaptive_csv(recs), "iter,dof,energy_err,eta,kappa\n0,25,2.00e+00,1.00e+00,0.500\n");
}

TEST(Report, SvgOutputsAreWellFormed) {
  const std::string s = loglog_svg({10, 100, 1000}, {{"De", {1, 0.3, 0.1}}});
  EXPECT_EQ(s.rfind("<svg", 0), 0u);
  EXPECT_NE(s.find("</svg>"), std::string::npos);
}

TEST(Parallel, SumIsIndependentOfChunking) {
  const double a = parallel_sum(100000, [](std::size_t i) { return 1.0 / (1.0 + static_cast<double>(i)); });
  double b = 0.0;
  for (std::size_t blk = 0; blk < 100000; blk += 4096) {
    double s = 0.0;
    for (std::size_t i = blk; i < std::min<std::size_t>(blk + 4096, 100000); ++i) s += 1.0 / (1.0 + static_cast<double>(i));
    b += s;
  }
  EXPECT_EQ(a, b);
}

TEST(Parallel, ForVisitsEveryIndexOnce) {
  std::vector<int> hits(12345, 0);
  parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) EXPECT_EQ(h, 1);
}
