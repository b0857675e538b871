#include <filesystem>
#include <functional>

#include <gtest/gtest.h>

#include "entrolib/problem.hpp"
#include "entrolib/toml.hpp"

using namespace entrolib;

namespace {

const std::filesystem::path problems_dir = ENTROLIB_PROBLEMS_DIR;

AnyProblem load(const std::string &name) { return parse_problem(read_file(problems_dir / name)); }

// Returns the error, failing the test if none is thrown.
ParseError parse_failure(const std::string &src)
{
    try {
        parse_problem(src);
    } catch (const ParseError &e) {
        return e;
    } catch (const Error &e) {
        ADD_FAILURE() << "unpositioned error: " << e.what();
        return ParseError(0, 0, "", {}, e.kind());
    }
    ADD_FAILURE() << "no error for:\n" << src;
    return ParseError(0, 0, "");
}

const std::string header = "[ring]\nfield = \"Q\"\nvars = [\"x\", \"y\"]\n";

} // namespace

TEST(Toml, Subset)
{
    auto doc = toml::parse("# comment\n[a]\nk = \"v\" # trailing\nn = -1_000\nf = 2.5\nb = true\n"
                           "arr = [\n  \"x\", # c\n  'y',\n]\n\"quoted key\" = 'lit\\eral'\n");
    const auto *a = doc.find("a");
    ASSERT_NE(a, nullptr);
    EXPECT_EQ(a->find("k")->value.as_string(), "v");
    EXPECT_EQ(a->find("n")->value.as_integer(), -1000);
    EXPECT_EQ(a->find("f")->value.as_float(), 2.5);
    EXPECT_TRUE(a->find("b")->value.as_bool());
    ASSERT_EQ(a->find("arr")->value.as_array().size(), 2u);
    EXPECT_EQ(a->find("arr")->value.as_array()[1].as_string(), "y");
    EXPECT_EQ(a->find("quoted key")->value.as_string(), "lit\\eral");
    EXPECT_EQ(a->find("arr")->value.as_array()[0].line, 8u);
    EXPECT_EQ(a->find("k")->value.content_column, 6u);

    auto esc = toml::parse("s = \"a\\\"b\\n\"\n");
    EXPECT_EQ(esc.tables[0].find("s")->value.as_string(), "a\"b\n");
}

TEST(Toml, Errors)
{
    auto err = [](const std::string &src) {
        try {
            toml::parse(src);
        } catch (const ParseError &e) {
            return e;
        }
        ADD_FAILURE() << src;
        return ParseError(0, 0, "");
    };
    auto e = err("a = \"open\n");
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 5u);
    EXPECT_EQ(err("[t]\nk = 1 2\n").line(), 2u);
    EXPECT_EQ(err("k = {a = 1}\n").kind(), ErrorKind::ParseError);
    EXPECT_EQ(err("a.b = 1\n").kind(), ErrorKind::ParseError);
    EXPECT_EQ(err("[[t]]\n").kind(), ErrorKind::ParseError);
    EXPECT_EQ(err("k = [1, 2\n").kind(), ErrorKind::ParseError);
    EXPECT_EQ(err("k = 99999999999999999999\n").kind(), ErrorKind::ParseError);
    EXPECT_EQ(err("k = 1\nk = 2\n").kind(), ErrorKind::SchemaError);
    EXPECT_EQ(err("k = 1\nk = 2\n").line(), 2u);
    EXPECT_EQ(err("[t]\n[t]\n").kind(), ErrorKind::SchemaError);
    EXPECT_EQ(err("k = \"\\q\"\n").kind(), ErrorKind::ParseError);
    EXPECT_EQ(err("k = nope\n").kind(), ErrorKind::ParseError);
}

TEST(Problem, FrobeniusFile)
{
    auto any = load("frobenius_f2.toml");
    ASSERT_TRUE(std::holds_alternative<Problem<PrimeField>>(any));
    const auto &pr = std::get<Problem<PrimeField>>(any);
    EXPECT_EQ(pr.ctx->field().characteristic(), 2u);
    EXPECT_EQ(pr.ctx->names(), (std::vector<std::string>{"x", "y"}));
    EXPECT_EQ(format_polynomial(pr.images[0]), "x^2");
    EXPECT_EQ(format_polynomial(pr.images[1]), "y^2");
    EXPECT_EQ(pr.options.n_max, 6u);
    EXPECT_EQ(pr.options.N_budget, 512u);
    EXPECT_FALSE(pr.q);
    EXPECT_NO_THROW(pr.endomorphism());
}

TEST(Problem, ShippedFilesParse)
{
    for (const auto &entry : std::filesystem::directory_iterator(problems_dir)) {
        if (entry.path().filename() == "bad_prime.toml") {
            continue;
        }
        EXPECT_NO_THROW(load(entry.path().filename().string())) << entry.path();
    }
}

TEST(Problem, OptionsAndOverrides)
{
    auto any = load("diagonal_23.toml");
    const auto &pr = std::get<Problem<Rationals>>(any);
    ASSERT_TRUE(pr.q);
    EXPECT_EQ(pr.q->generators().size(), 2u);
    EXPECT_EQ(pr.options.s_max, 12u);
    EXPECT_EQ(pr.options.power_k, 2u);

    ProblemOverrides ov;
    ov.n_max = 3;
    ov.N_budget = 64;
    ov.term_budget = 1000;
    auto over = std::get<Problem<Rationals>>(parse_problem(read_file(problems_dir / "diagonal_23.toml"), ov));
    EXPECT_EQ(over.options.n_max, 3u);
    EXPECT_EQ(over.options.N_budget, 64u);
    EXPECT_EQ(over.ctx->term_limit(), 1000u);

    auto h = std::get<Problem<Rationals>>(parse_problem(header + "[map]\nx = \"x\"\ny = \"y\"\n[options]\nh = 2\n"));
    EXPECT_EQ(h.options.h, 2.0);
}

TEST(Problem, DownstreamErrors)
{
    auto shifted = std::get<Problem<Rationals>>(load("shifted.toml"));
    try {
        shifted.endomorphism();
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotLocal);
    }
    auto bad_q = std::get<Problem<Rationals>>(parse_problem(
        "[ring]\nfield = \"Q\"\nvars = [\"x\"]\nquotient = [\"x - 1\"]\n[map]\nx = \"x\"\n"));
    EXPECT_THROW(bad_q.ring(), Error);
    auto bad_dim = std::get<Problem<Rationals>>(parse_problem(
        "[ring]\nfield = \"Q\"\nvars = [\"x\", \"y\"]\nquotient = [\"x*y\"]\ndim = 2\n[map]\nx = \"x\"\ny = \"y\"\n"));
    try {
        bad_dim.ring();
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SchemaError);
    }
}

TEST(Problem, SchemaErrors)
{
    auto p6 = parse_failure("[ring]\nfield = \"Fp\"\np = 6\nvars = [\"x\"]\n[map]\nx = \"x^2\"\n");
    EXPECT_EQ(p6.kind(), ErrorKind::SchemaError);
    EXPECT_EQ(p6.line(), 3u);
    EXPECT_EQ(p6.column(), 5u);
    EXPECT_EQ(parse_failure(read_file(problems_dir / "bad_prime.toml")).kind(), ErrorKind::SchemaError);

    EXPECT_EQ(parse_failure("[ring]\nfield = \"Q\"\np = 5\nvars = [\"x\"]\n[map]\nx = \"x\"\n").kind(),
              ErrorKind::FieldMismatch);
    EXPECT_EQ(parse_failure("[ring]\nfield = \"Fp\"\nvars = [\"x\"]\n[map]\nx = \"x\"\n").kind(),
              ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure("[ring]\nfield = \"R\"\nvars = [\"x\"]\n[map]\nx = \"x\"\n").kind(),
              ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure("[ring]\nfield = \"Fp\"\np = 2147483659\nvars = [\"x\"]\n[map]\nx = \"x\"\n").kind(),
              ErrorKind::SchemaError);

    // Missing pieces.
    EXPECT_EQ(parse_failure(header).kind(), ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure("[map]\nx = \"x\"\n").kind(), ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure("[ring]\nfield = \"Q\"\n[map]\n").kind(), ErrorKind::SchemaError);
    auto missing = parse_failure(header + "[map]\nx = \"x\"\n");
    EXPECT_EQ(missing.kind(), ErrorKind::SchemaError);
    EXPECT_NE(std::string(missing.what()).find("'y'"), std::string::npos);

    // Unknown and duplicate keys.
    EXPECT_EQ(parse_failure(header + "colour = 1\n[map]\nx = \"x\"\ny = \"y\"\n").line(), 4u);
    EXPECT_EQ(parse_failure(header + "[map]\nx = \"x\"\ny = \"y\"\nz = \"x\"\n").kind(), ErrorKind::SchemaError);
    auto dup = parse_failure(header + "[map]\nx = \"x\"\nx = \"y\"\ny = \"y\"\n");
    EXPECT_EQ(dup.kind(), ErrorKind::SchemaError);
    EXPECT_EQ(dup.line(), 6u);
    EXPECT_EQ(parse_failure(header + "[map]\nx = \"x\"\ny = \"y\"\n[options]\nfoo = 1\n").kind(),
              ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure("top = 1\n" + header + "[map]\nx = \"x\"\ny = \"y\"\n").kind(), ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure(header + "[map]\nx = \"x\"\ny = \"y\"\n[extra]\n").kind(), ErrorKind::SchemaError);

    // Types and ranges.
    EXPECT_EQ(parse_failure(header + "[map]\nx = 2\ny = \"y\"\n").kind(), ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure(header + "[map]\nx = \"x\"\ny = \"y\"\n[options]\nn_max = 0\n").kind(),
              ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure(header + "[map]\nx = \"x\"\ny = \"y\"\n[options]\nn_max = \"6\"\n").kind(),
              ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure("[ring]\nfield = \"Q\"\nvars = [\"x\", \"x\"]\n[map]\nx = \"x\"\n").kind(),
              ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure("[ring]\nfield = \"Q\"\nvars = []\n[map]\n").kind(), ErrorKind::SchemaError);
    EXPECT_EQ(parse_failure("[ring]\nfield = \"Q\"\nvars = [\"x\", 1]\n[map]\n").kind(), ErrorKind::SchemaError);
}

TEST(Problem, ExpressionErrorsUseFilePositions)
{
    auto e = parse_failure(header + "[map]\nx = \"x + z\"\ny = \"y\"\n");
    EXPECT_EQ(e.kind(), ErrorKind::UnknownVariable);
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.column(), 10u);
    EXPECT_EQ(e.offender(), "z");

    auto s = parse_failure(header + "quotient = [\"x*y\", \"x +* y\"]\n[map]\nx = \"x\"\ny = \"y\"\n");
    EXPECT_EQ(s.kind(), ErrorKind::ParseError);
    EXPECT_EQ(s.line(), 4u);
    EXPECT_EQ(s.column(), 24u);
}
