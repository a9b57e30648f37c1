#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "pqlab/scan.hpp"

using namespace pqlab;

TEST_CASE("diagonal 4x4 forward order") {
  const ScanOrder& scan = scan_order(ScanKind::kDiagonal, 4);
  const std::vector<ScanPos> expected = {
      {0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}, {0, 3}, {1, 2},
      {2, 1}, {3, 0}, {1, 3}, {2, 2}, {3, 1}, {2, 3}, {3, 2}, {3, 3},
  };
  REQUIRE(scan.cells() == 16);
  for (size_t i = 0; i < expected.size(); ++i) CHECK(scan.forward(i) == expected[i]);
  // reverse storage ends on the DC position
  CHECK(scan.positions[13] == ScanPos{1, 0});
  CHECK(scan.positions[14] == ScanPos{0, 1});
  CHECK(scan.positions[15] == ScanPos{0, 0});
}

TEST_CASE("every scan is a permutation of the grid") {
  for (ScanKind kind : {ScanKind::kDiagonal, ScanKind::kHorizontal, ScanKind::kVertical}) {
    for (int n : {4, 8, 16, 32}) {
      const ScanOrder& scan = scan_order(kind, n);
      REQUIRE(scan.cells() == static_cast<size_t>(n) * n);
      std::set<std::pair<int, int>> seen;
      for (const ScanPos& p : scan.positions) {
        CHECK(p.x >= 0);
        CHECK(p.x < n);
        CHECK(p.y >= 0);
        CHECK(p.y < n);
        seen.insert({p.x, p.y});
      }
      CHECK(seen.size() == static_cast<size_t>(n) * n);
      CHECK(scan.positions.back() == ScanPos{0, 0});
    }
  }
  CHECK_THROWS_AS(scan_order(ScanKind::kDiagonal, 3), Error);
}

TEST_CASE("8x8 horizontal scan walks 4x4 sub-blocks row major") {
  const ScanOrder& scan = scan_order(ScanKind::kHorizontal, 8);
  // first sub-block: top-left tile in row-major order
  for (int i = 0; i < 16; ++i) {
    const ScanPos& p = scan.forward(i);
    CHECK(p.x == i % 4);
    CHECK(p.y == i / 4);
  }
  // second sub-block is the top-right tile
  for (int i = 16; i < 32; ++i) {
    const ScanPos& p = scan.forward(i);
    CHECK(p.x == 4 + (i - 16) % 4);
    CHECK(p.y == (i - 16) / 4);
  }
}

TEST_CASE("8x8 vertical scan walks 4x4 sub-blocks column major") {
  const ScanOrder& scan = scan_order(ScanKind::kVertical, 8);
  for (int i = 0; i < 16; ++i) {
    const ScanPos& p = scan.forward(i);
    CHECK(p.x == i / 4);
    CHECK(p.y == i % 4);
  }
  // second sub-block is the bottom-left tile
  for (int i = 16; i < 32; ++i) {
    const ScanPos& p = scan.forward(i);
    CHECK(p.x == (i - 16) / 4);
    CHECK(p.y == 4 + (i - 16) % 4);
  }
}

TEST_CASE("8x8 diagonal scan visits sub-blocks diagonally") {
  const ScanOrder& scan = scan_order(ScanKind::kDiagonal, 8);
  // first 16 positions stay inside the top-left sub-block
  for (int i = 0; i < 16; ++i) {
    CHECK(scan.forward(i).x < 4);
    CHECK(scan.forward(i).y < 4);
  }
  // next tile in the up-right diagonal grid order is the bottom-left one
  for (int i = 16; i < 32; ++i) {
    CHECK(scan.forward(i).x < 4);
    CHECK(scan.forward(i).y >= 4);
  }
}
