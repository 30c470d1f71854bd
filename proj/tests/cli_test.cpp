#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "milnork/cli.hpp"

using namespace milnork;

namespace {

std::string run_text(const std::string& doc) { return run(parse(doc)).text(); }

bool has_line(const std::string& text, const std::string& line) {
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        if (text.compare(pos, end - pos, line) == 0) return true;
        pos = end + 1;
    }
    return false;
}

}  // namespace

TEST(Parse, SymbolDocuments) {
    InputDocument doc = parse("field F7; symbol {2,3};");
    EXPECT_EQ(doc.op, OpKind::Normalize);
    EXPECT_EQ(doc.element.degree(), 2);
    EXPECT_EQ(doc.field->size(), 7);

    EXPECT_THROW(parse("field F7; symbol {2,0};"), DomainError);  // zero entry

    InputDocument rec = parse("field F5(t); reciprocity {t-1, t};");
    EXPECT_EQ(rec.op, OpKind::Reciprocity);
    EXPECT_EQ(rec.field->kind(), FieldKind::RatFunc);
}

TEST(Parse, FieldDescriptors) {
    EXPECT_EQ(parse_field_descriptor("F7")->size(), 7);
    EXPECT_EQ(parse_field_descriptor("F9")->size(), 9);
    EXPECT_EQ(parse_field_descriptor("F9 mod y^2+1")->size(), 9);
    FieldPtr kt = parse_field_descriptor("F5(t)");
    EXPECT_EQ(kt->kind(), FieldKind::RatFunc);
    EXPECT_EQ(kt->var(), "t");
    EXPECT_EQ(parse_field_descriptor("F9(t) mod y^2+1")->base()->size(), 9);

    EXPECT_THROW(parse_field_descriptor("F6"), InputError);       // not a prime power
    EXPECT_THROW(parse_field_descriptor("F9 mod y^2+2"), InputError);  // reducible
    EXPECT_THROW(parse_field_descriptor("F9 mod y^3+1"), InputError);  // wrong degree
    EXPECT_THROW(parse_field_descriptor("F2097153"), InputError);      // over the 2^20 cap
}

TEST(Parse, ErrorsCarryLocation) {
    try {
        parse("field F7;\nsymbol {2,,3};");
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column"), std::string::npos) << msg;
    }
    EXPECT_THROW(parse("field F7; frobnicate {2};"), InputError);
    EXPECT_THROW(parse("field F7; symbol {2} trailing;"), InputError);
}

TEST(Parse, ExpressionsAndOverrides) {
    // extension generator is usable in entries
    InputDocument doc = parse("field F9; symbol {y+1, 2};");
    EXPECT_EQ(doc.element.degree(), 2);

    // field override rebinds the document
    ParseOptions opts;
    opts.field_override = "F11";
    EXPECT_EQ(parse("field F7; symbol {2,3};", opts).field->size(), 11);

    ParseOptions mode;
    mode.mode_override = HomotopyMode::Endpoint;
    InputDocument h =
        parse("field F7; homotopy F = x^2+(5+t*5)*x+6; g = [x]; mode strict;", mode);
    EXPECT_EQ(h.homotopy.mode, HomotopyMode::Endpoint);
}

TEST(Run, RhoGoldenLine) {
    std::string out = run_text("field F7; rho f = (x-2)^2*(x-3); g = [x];");
    EXPECT_TRUE(has_line(out, "K1 exp=5 mod=6 gen=3")) << out;
    EXPECT_TRUE(has_line(out, "support place=x+5 mult=2")) << out;
}

TEST(Run, HomotopyGolden) {
    // the multilinearity family for g' = 2, g'' = 3 over F_7:
    // x^2 + (-5 + t(5 - 6 - 1))x + 6 = x^2 + (2 + 5t)x + 6
    std::string out = run_text("field F7; homotopy F = x^2+(2+5*t)*x+6; g = [x]; mode strict;");
    EXPECT_TRUE(has_line(out, "equal=true")) << out;
    EXPECT_TRUE(has_line(out, "rho0=K1 exp=3 mod=6 gen=3")) << out;
    EXPECT_TRUE(has_line(out, "guaranteed=true")) << out;
}

TEST(Run, ReduceFramingGolden) {
    RunResult r = run(parse("field F5; matrix [2,0];"));
    const std::string expected =
        "op=reduce-framing\n"
        "field=F5\n"
        "n=1 N=2\n"
        "t i=1 j=2 lambda=3\n"
        "t i=2 j=1 lambda=4\n"
        "t i=1 j=2 lambda=4\n"
        "count=3\n"
        "check=ok\n";
    EXPECT_EQ(r.text(), expected);
    EXPECT_EQ(r.exit_code, 0);
}

TEST(Run, RhoOverFunctionFieldBase) {
    std::string out = run_text("field F5(u); rho f = (x-u)^2*(x-u-1); g = [x];");
    // class of u^2 (u+1): constant part is the leading coefficient 1,
    // places u (valuation 2) and u+1 (valuation 1)
    EXPECT_TRUE(has_line(out, "support place=x+(4*u) mult=2")) << out;
    EXPECT_TRUE(has_line(out, "constant K1 exp=0 mod=4 gen=2")) << out;
    EXPECT_TRUE(has_line(out, "place=u value=K0 n=2")) << out;
    EXPECT_TRUE(has_line(out, "place=u+1 value=K0 n=1")) << out;
}

TEST(Run, ReciprocityReport) {
    RunResult r = run(parse("field F5(t); reciprocity {t-1, t};"));
    EXPECT_TRUE(has_line(r.text(), "zero=true")) << r.text();
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_TRUE(has_line(r.text(), "total K1 exp=0 mod=4 gen=2")) << r.text();
}

TEST(Run, TameAndNormalize) {
    std::string out = run_text("field F5(t); tame {t, 3} at t;");
    EXPECT_TRUE(has_line(out, "residue={3}")) << out;

    out = run_text("field F5(t); tame {-1, t} at infinity;");
    EXPECT_TRUE(has_line(out, "place=infinity")) << out;
    EXPECT_TRUE(has_line(out, "K1 exp=2 mod=4 gen=2")) << out;

    out = run_text("field F7; normalize {2}+{3};");
    EXPECT_TRUE(has_line(out, "K1 exp=3 mod=6 gen=3")) << out;

    out = run_text("field F5(t); normalize {t, t-1};");
    EXPECT_TRUE(has_line(out, "constant K2 zero")) << out;
    EXPECT_TRUE(has_line(out, "place=t value=K1 exp=2 mod=4 gen=2")) << out;
}

TEST(Run, VerificationFailureExitCode) {
    // endpoint family whose two ends differ: exit code 1
    RunResult r = run(parse(
        "field F5; homotopy F = x^2-4; g = [x/(x-t+1)]; mode endpoint;"));
    EXPECT_TRUE(has_line(r.text(), "equal=false")) << r.text();
    EXPECT_TRUE(has_line(r.text(), "guaranteed=false")) << r.text();
    EXPECT_EQ(r.exit_code, 1);
}

TEST(Run, DeterministicText) {
    const std::string doc = "field F5(t); reciprocity {t^2-2, (t-1)/(t+2)};";
    EXPECT_EQ(run_text(doc), run_text(doc));
}

TEST(Render, FixpointOnCanonicalDocuments) {
    const char* docs[] = {
        "field F7; symbol {2,3};",
        "field F9 mod y^2+1; normalize {y+1, 2} - 2*{2, y};",
        "field F5(t); reciprocity {t-1, t};",
        "field F5(t); tame {t, 3} at t;",
        "field F7; rho f = (x-2)^2*(x-3); g = [x, (x-1)/(x-4)];",
        "field F7; homotopy F = x^2+(2+5*t)*x+6; g = [x]; mode strict;",
        "field F7; homotopy F = x^2 + (5*t)*x + 6; g = [x]; mode strict;",
        "field F5; matrix [[2,0],[1,3]];",
    };
    for (const char* d : docs) {
        std::string once = render(parse(d));
        std::string twice = render(parse(once));
        EXPECT_EQ(once, twice) << d;
    }
}

TEST(Run, JsonMirror) {
    RunResult r = run(parse("field F7; rho f = (x-2)^2*(x-3); g = [x];"));
    EXPECT_EQ(r.json["op"], "rho");
    EXPECT_EQ(r.json["canonical"]["exp"], 5);
    EXPECT_EQ(r.json["canonical"]["mod"], 6);
}

#ifdef MILNORK_CLI_PATH
namespace {

int run_cli(const std::string& args, const std::string& doc, std::string* out) {
    std::string doc_path = ::testing::TempDir() + "milnork_doc.txt";
    std::string out_path = ::testing::TempDir() + "milnork_out.txt";
    {
        std::ofstream f(doc_path);
        f << doc;
    }
    std::string cmd = std::string(MILNORK_CLI_PATH) + " " + args + " " + doc_path + " > " + out_path;
    int status = std::system(cmd.c_str());
    std::ifstream f(out_path);
    std::stringstream ss;
    ss << f.rdbuf();
    *out = ss.str();
    std::remove(doc_path.c_str());
    std::remove(out_path.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST(CliBinary, SubcommandsAndExitCodes) {
    std::string out;
    EXPECT_EQ(run_cli("rho", "field F7; rho f = (x-2)^2*(x-3); g = [x];", &out), 0);
    EXPECT_TRUE(has_line(out, "K1 exp=5 mod=6 gen=3")) << out;

    // malformed input: exit 2
    EXPECT_EQ(run_cli("normalize", "field F7; symbol {2,0};", &out), 2);

    // subcommand mismatch: exit 2
    EXPECT_EQ(run_cli("rho", "field F7; symbol {2,3};", &out), 2);

    // run executes whatever the document declares
    EXPECT_EQ(run_cli("run", "field F5(t); reciprocity {t-1, t};", &out), 0);
    EXPECT_TRUE(has_line(out, "zero=true")) << out;
}
#endif
