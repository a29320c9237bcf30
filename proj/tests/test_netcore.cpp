#include <gtest/gtest.h>

#include <filesystem>

#include "netest/io.hpp"
#include "netest/netcore.hpp"
#include "oracles.hpp"

using namespace netest;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected netest::Error";
  return ErrorCode::IoFailure;
}

}  // namespace

TEST(Validate, AcceptsMinimalNetwork) {
  const WeightMatrix w = validate(m2(0, 0.5, 0.5, 0));
  EXPECT_EQ(w.size(), 2);
  EXPECT_EQ(w(0, 1), 0.5);
}

TEST(Validate, NamesOffendingEntry) {
  try {
    validate(m2(0.1, 0.5, 0.5, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonzeroDiagonal);
    EXPECT_EQ(*e.where(), (EntryIndex{0, 0}));
    EXPECT_NE(std::string(e.what()).find("(1,1)"), std::string::npos);
  }
  try {
    validate(m2(0, 1.2, 1.2, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfRange);
    EXPECT_NE(std::string(e.what()).find("(1,2)"), std::string::npos);
  }
}

TEST(Validate, RejectsAsymmetryAndShape) {
  EXPECT_EQ(code_of([] { validate(m2(0, 0.5, 0.4, 0)); }), ErrorCode::Asymmetric);
  EXPECT_EQ(code_of([] { validate(Matrix::Zero(2, 3)); }), ErrorCode::NotSquare);
  EXPECT_EQ(code_of([] { validate(m2(0, std::nan(""), std::nan(""), 0)); }), ErrorCode::OutOfRange);
  // Within the 1e-12 tolerance is accepted and stored exactly symmetric.
  const WeightMatrix w = validate(m2(0, 0.5, 0.5 + 5e-13, 0));
  EXPECT_EQ(w(0, 1), w(1, 0));
}

TEST(Project, ClampsSymmetrizesAndZeroesDiagonal) {
  EXPECT_EQ(project(m2(0, -0.2, -0.2, 0)).matrix(), m2(0, 0, 0, 0));
  EXPECT_EQ(project(m2(0, 1.5, 1.5, 0)).matrix(), m2(0, 1, 1, 0));
  EXPECT_EQ(project(m2(0.3, 0.5, 0.5, 0.3)).matrix(), m2(0, 0.5, 0.5, 0));
  EXPECT_EQ(project(m2(0, 0.2, 0.6, 0)).matrix(), m2(0, 0.4, 0.4, 0));
  EXPECT_THROW(project(Matrix::Zero(3, 2)), Error);
}

TEST(Project, IdempotentAndIdentityOnValidNetworks) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Matrix raw = Matrix::Random(7, 7) * 1.5;  // deliberately unsymmetric and out of range
    raw += Matrix::Constant(7, 7, static_cast<double>(seed % 3) * 0.1);
    const WeightMatrix once = project(raw);
    EXPECT_EQ(project(once).matrix(), once.matrix());
    EXPECT_NO_THROW(validate(once.matrix()));

    const Matrix valid = oracle::random_symmetric(7, seed);
    EXPECT_EQ(project(valid).matrix(), validate(valid).matrix());
  }
}

TEST(Helpers, ConstantMatrices) {
  Matrix h3(3, 3);
  h3 << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  EXPECT_EQ(hollow_ones(3), h3);
  EXPECT_EQ(all_ones(3), Matrix::Ones(3, 3));

  Matrix r2 = Matrix::Zero(3, 3);
  r2.col(1).setOnes();
  EXPECT_EQ(column_ones(3, 1), r2);

  const Matrix s = unit_entry(3, 0, 2);
  EXPECT_EQ(s.sum(), 1.0);
  EXPECT_EQ(s(0, 2), 1.0);

  EXPECT_THROW(column_ones(3, 3), Error);
  EXPECT_THROW(unit_entry(3, -1, 0), Error);
  EXPECT_THROW(circular_shift(3, 3), Error);
}

TEST(Helpers, CircularShiftMovesRowsDown) {
  EXPECT_EQ(circular_shift(4, 0), Matrix::Identity(4, 4));
  Matrix expected(3, 3);
  expected << 0, 0, 1, 1, 0, 0, 0, 1, 0;
  EXPECT_EQ(circular_shift(3, 1) * Matrix::Identity(3, 3), expected);

  Matrix rows(3, 2);
  rows << 1, 2, 3, 4, 5, 6;
  const Matrix shifted = circular_shift(3, 1) * rows;
  EXPECT_EQ(shifted.row(1), rows.row(0));
  EXPECT_EQ(shifted.row(0), rows.row(2));
}

TEST(Helpers, CircularShiftsFormACyclicGroup) {
  for (Index n : {1, 2, 5, 7})
    for (Index r = 0; r < n; ++r)
      for (Index s = 0; s < n; ++s)
        EXPECT_EQ(circular_shift(n, r) * circular_shift(n, s), circular_shift(n, (r + s) % n));
  // All shifts together cover every entry exactly once.
  Matrix total = Matrix::Zero(5, 5);
  for (Index r = 0; r < 5; ++r) total += circular_shift(5, r);
  EXPECT_EQ(total, Matrix::Ones(5, 5));
}

TEST(MissingMaskTest, InvariantsAndCounts) {
  BoolMatrix b = BoolMatrix::Constant(3, 3, false);
  b(0, 2) = b(2, 0) = true;
  const MissingMask mask(b);
  EXPECT_EQ(mask.pair_count(), 1);
  EXPECT_FALSE(mask.empty());
  EXPECT_TRUE(MissingMask::none(3).empty());

  BoolMatrix asym = b;
  asym(2, 0) = false;
  EXPECT_EQ(code_of([&] { MissingMask{asym}; }), ErrorCode::Asymmetric);
  BoolMatrix diag = b;
  diag(1, 1) = true;
  EXPECT_EQ(code_of([&] { MissingMask{diag}; }), ErrorCode::NonzeroDiagonal);
}

TEST(ModuleAssignmentTest, DeltaMatrix) {
  const ModuleAssignment m({1, 1, 2});
  Matrix expected(3, 3);
  expected << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  EXPECT_EQ(m.delta(), expected);
  EXPECT_EQ(m.module_count(), 2);
  EXPECT_THROW(ModuleAssignment({1, 0}), Error);
}

TEST(Io, DenseCsvRoundTripIsExact) {
  const auto dir = std::filesystem::temp_directory_path() / "netest_io_test";
  std::filesystem::create_directories(dir);
  const Matrix w = oracle::random_symmetric(9, 42);
  io::save_dense(dir / "w.csv", w);
  const WeightMatrix back = io::load_dense(dir / "w.csv");
  EXPECT_EQ(back.matrix(), w);
  EXPECT_FALSE(std::filesystem::exists(dir / "w.csv.tmp"));
}

TEST(Io, DenseCsvErrors) {
  EXPECT_EQ(code_of([] { io::parse_csv_matrix("0,1\n1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_csv_matrix("0,x\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::load_dense("/nonexistent/file.csv"); }), ErrorCode::IoFailure);
  EXPECT_EQ(code_of([] { validate(io::parse_csv_matrix("0,0.5\n0.5,0\n0,0\n")); }), ErrorCode::NotSquare);
}

TEST(Io, EdgeListSymmetrizesAndDefaultsToZero) {
  const Matrix m = io::parse_edge_list("# comment\n1 2 0.5\n3 2 0.25\n\n", 4);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 1) = expected(1, 0) = 0.5;
  expected(2, 1) = expected(1, 2) = 0.25;
  EXPECT_EQ(m, expected);
  EXPECT_NO_THROW(validate(m));

  EXPECT_EQ(io::parse_edge_list("1 3 1\n").rows(), 3);
  EXPECT_EQ(code_of([] { io::parse_edge_list("1 2\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_edge_list("0 2 0.1\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { io::parse_edge_list("1 5 0.1\n", 3); }), ErrorCode::IndexOutOfRange);
  // Conflicting directions are caught by validation.
  EXPECT_EQ(code_of([] { validate(io::parse_edge_list("1 2 0.1\n2 1 0.3\n")); }), ErrorCode::Asymmetric);
  EXPECT_EQ(code_of([] { validate(io::parse_edge_list("1 1 0.3\n")); }), ErrorCode::NonzeroDiagonal);
}

TEST(Io, EdgeListWriterFeedsLoader) {
  const Matrix w = oracle::random_symmetric(6, 3);
  EXPECT_EQ(io::parse_edge_list(io::format_edge_list(w), 6), w);
}

TEST(Io, ModulesAndMask) {
  const ModuleAssignment m = io::parse_modules("1\n2\n2\n\n");
  EXPECT_EQ(m.modules(), (std::vector<int>{1, 2, 2}));
  EXPECT_EQ(io::parse_modules(io::format_modules(m)), m);
  EXPECT_EQ(code_of([] { io::parse_modules("1\nx\n"); }), ErrorCode::ParseError);
}
