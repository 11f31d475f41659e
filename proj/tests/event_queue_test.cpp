#include <gtest/gtest.h>

#include <string>

#include "qkdsim/event_queue.hpp"

using namespace qkdsim;

TEST(EventQueue, OrdersByTimeThenInsertion) {
  EventQueue<std::string> q;
  q.schedule(2.0, "c");
  q.schedule(1.0, "a");
  q.schedule(1.0, "b");
  q.schedule(3.0, "d");
  std::string order;
  while (!q.empty()) order += q.pop().kind;
  EXPECT_EQ(order, "abcd");
  EXPECT_DOUBLE_EQ(q.now(), 3.0);
}

TEST(EventQueue, PastSchedulingIsFatal) {
  EventQueue<int> q;
  q.schedule(5.0, 1);
  q.pop();
  EXPECT_NO_THROW(q.schedule(5.0, 2));
  EXPECT_THROW(q.schedule(4.999, 3), SimulationIntegrityError);
}

TEST(EventQueue, NextTimeAndSequence) {
  EventQueue<int> q;
  EXPECT_FALSE(q.next_time());
  q.schedule(0.5, 1);
  q.schedule(0.25, 2);
  EXPECT_DOUBLE_EQ(*q.next_time(), 0.25);
  auto e = q.pop();
  EXPECT_EQ(e.kind, 2);
  EXPECT_EQ(e.sequence, 1u);
  EXPECT_EQ(q.size(), 1u);
}
