#include <gtest/gtest.h>
TEST(stub, ok) { SUCCEED(); }
