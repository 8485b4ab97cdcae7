#include "doctest.h"

#include "bwcons/types.hpp"

using namespace bwcons;

TEST_CASE("quorum thresholds for the standard sizes") {
  // (n, t) -> (n-t, n-2t), worked out by hand.
  CHECK(quorum_thresholds(4, 1) == std::pair<std::uint32_t, std::uint32_t>{3, 2});
  CHECK(quorum_thresholds(5, 1) == std::pair<std::uint32_t, std::uint32_t>{4, 3});
  CHECK(quorum_thresholds(7, 2) == std::pair<std::uint32_t, std::uint32_t>{5, 3});
  CHECK(quorum_thresholds(10, 3) == std::pair<std::uint32_t, std::uint32_t>{7, 4});
}

TEST_CASE("resilience bound rejects n <= 3t and t = 0") {
  CHECK_THROWS_AS(quorum_thresholds(3, 1), ResilienceError);
  CHECK_THROWS_AS(quorum_thresholds(6, 2), ResilienceError);
  CHECK_THROWS_AS(quorum_thresholds(9, 3), ResilienceError);
  CHECK_THROWS_AS(quorum_thresholds(4, 0), ResilienceError);
  CHECK_NOTHROW(quorum_thresholds(4, 1));
  CHECK_NOTHROW(quorum_thresholds(7, 2));
}

TEST_CASE("two quorums overlap in a super-minority") {
  // The filter phases rest on this: any two (n-t)-collects share at least
  // n-2t senders, and n-2t of anything is a majority of a quorum. Checked
  // as 2(n-2t) > n-t across the full range of legal t.
  for (std::uint32_t n = 4; n <= 50; ++n) {
    std::uint32_t tmax = (n - 1) / 3;
    for (std::uint32_t t = 1; t <= tmax; ++t) {
      CAPTURE(n);
      CAPTURE(t);
      CHECK(2 * (n - 2 * t) > n - t);
    }
  }
}

TEST_CASE("coordinator rotation") {
  SystemParams p4(4, 1);
  CHECK(coordinator_of(1, p4) == pid(1));
  CHECK(coordinator_of(2, p4) == pid(2));
  CHECK(coordinator_of(4, p4) == pid(4));
  CHECK(coordinator_of(5, p4) == pid(1));
  CHECK(coordinator_of(9, p4) == pid(1));

  SystemParams p7(7, 2);
  CHECK(coordinator_of(7, p7) == pid(7));
  CHECK(coordinator_of(8, p7) == pid(1));

  CHECK_THROWS_AS(coordinator_of(0, p4), std::invalid_argument);
}

TEST_CASE("values and the non-value") {
  Value bot = Value::bottom();
  Value a = Value::of("a");
  Value b = Value::of("b");

  CHECK(bot.is_bottom());
  CHECK_FALSE(a.is_bottom());
  CHECK(a == Value::of("a"));
  CHECK_FALSE(a == b);
  CHECK_FALSE(a == bot);
  CHECK(bot == Value::bottom());

  // bottom sorts first, then payload order
  CHECK(bot < a);
  CHECK(a < b);
  CHECK_FALSE(b < a);
  CHECK_FALSE(bot < Value::bottom());
}

TEST_CASE("value sets classify collected quorums") {
  Value a = Value::of("a");
  Value b = Value::of("b");

  ValueSet unan;
  unan.add(a);
  unan.add(a);
  unan.add(a);
  CHECK(unan.unanimous() == a);
  CHECK(unan.single_non_bottom() == a);
  CHECK_FALSE(unan.all_bottom());

  ValueSet mixed;
  mixed.add(a);
  mixed.add(Value::bottom());
  mixed.add(a);
  CHECK_FALSE(mixed.unanimous().has_value());
  CHECK(mixed.single_non_bottom() == a);
  CHECK(mixed.contains(a));
  CHECK(mixed.contains(Value::bottom()));
  CHECK_FALSE(mixed.contains(b));

  ValueSet two;
  two.add(a);
  two.add(b);
  CHECK_FALSE(two.unanimous().has_value());
  CHECK_FALSE(two.single_non_bottom().has_value());

  ValueSet bots;
  bots.add(Value::bottom());
  bots.add(Value::bottom());
  CHECK(bots.all_bottom());
  CHECK(bots.unanimous() == Value::bottom());
  CHECK_FALSE(bots.single_non_bottom().has_value());
}
