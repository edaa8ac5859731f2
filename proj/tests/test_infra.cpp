#include <doctest.h>

#include <stdexcept>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "lilfields/io.hpp"
#include "lilfields/parallel.hpp"
#include "lilfields/rng.hpp"

using namespace lilfields;

TEST_SUITE("infra") {

TEST_CASE("parallel context covers every index exactly once") {
  for (int threads : {1, 2, 5}) {
    const ParallelContext par(threads);
    std::vector<std::atomic<int>> hits(257);
    par.for_each_index(257, [&](std::int64_t i) { ++hits[static_cast<std::size_t>(i)]; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("worker exceptions propagate to the caller") {
  const ParallelContext par(3);
  CHECK_THROWS_AS(par.for_each_index(100,
                                     [](std::int64_t i) {
                                       if (i == 57) throw std::runtime_error("boom");
                                     }),
                  std::runtime_error);
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0, 4.0, 1.499999999999761}) {
    const std::string s = format_double(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("derived seeds and site streams separate") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  SiteStream a(9, LatticeIndex{3, 4}, 0);
  SiteStream a_again(9, LatticeIndex{3, 4}, 0);
  SiteStream b(9, LatticeIndex{4, 3}, 0);
  SiteStream c(9, LatticeIndex{3, 4}, 1);
  const double va = a.next_unit();
  CHECK(va == a_again.next_unit());
  CHECK(va != b.next_unit());
  CHECK(va != c.next_unit());
  for (int k = 0; k < 1000; ++k) {
    const double u = a.next_unit();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("grid binary error paths") {
  CHECK_THROWS_AS(read_grid_binary("/nonexistent/grid.bin"), std::runtime_error);
  const auto path = std::filesystem::temp_directory_path() / "lilfields_truncated.bin";
  {
    std::ofstream os(path, std::ios::binary);
    const std::int64_t d = 2;
    os.write(reinterpret_cast<const char*>(&d), sizeof(d));
  }
  CHECK_THROWS_AS(read_grid_binary(path.string()), std::runtime_error);
  std::remove(path.c_str());
}

}  // TEST_SUITE
