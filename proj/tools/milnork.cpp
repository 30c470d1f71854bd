// Command-line front end. Documents come from a file argument or stdin;
// subcommands select/verify the operation. Exit codes: 0 success,
// 1 verification failure, 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "milnork/milnork.hpp"

namespace {

const char* kUsage =
    "usage: milnork <subcommand> [input-file|-] [flags]\n"
    "\n"
    "subcommands:\n"
    "  normalize       canonical form of a symbol sum        (doc op: symbol|normalize)\n"
    "  tame            residue of a symbol sum at a place    (doc op: tame ... at <place>)\n"
    "  reciprocity     residues at all places, total = 0?    (doc op: reciprocity)\n"
    "  rho             evaluate a framed datum               (doc op: rho f = ...; g = [...];)\n"
    "  homotopy        compare the two ends of a family      (doc op: homotopy F = ...; ...)\n"
    "  reduce-framing  transvection script to [I_n | 0]      (doc op: matrix [...];)\n"
    "  run             execute whatever operation the document declares\n"
    "  selftest        run the acceptance property suites\n"
    "\n"
    "flags:\n"
    "  --json          emit one JSON object instead of text\n"
    "  --seed <u64>    selftest seed (default 42)\n"
    "  --mode strict|endpoint   override the homotopy mode\n"
    "  --field <desc>  override the document's field (e.g. 'F7', 'F9 mod y^2+1', 'F5(t)')\n"
    "\n"
    "documents look like:\n"
    "  field F7; symbol {2,3};\n"
    "  field F5(t); reciprocity {t-1, t};\n"
    "  field F7; rho f = (x-2)^2*(x-3); g = [x];\n";

int fail_input(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

bool expected_op(const std::string& sub, milnork::OpKind op) {
    using milnork::OpKind;
    if (sub == "run") return true;
    if (sub == "normalize") return op == OpKind::Normalize;
    if (sub == "tame") return op == OpKind::Tame;
    if (sub == "reciprocity") return op == OpKind::Reciprocity;
    if (sub == "rho") return op == OpKind::Rho;
    if (sub == "homotopy") return op == OpKind::Homotopy;
    if (sub == "reduce-framing") return op == OpKind::ReduceFraming;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace milnork;
    if (argc < 2) {
        std::cerr << kUsage;
        return 2;
    }
    std::string sub = argv[1];
    if (sub == "help" || sub == "--help" || sub == "-h") {
        std::cout << kUsage;
        return 0;
    }

    bool json = false;
    uint64_t seed = 42;
    std::string input_path;
    ParseOptions opts;
    for (int i = 2; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--json") {
            json = true;
        } else if (a == "--seed") {
            if (++i == argc) return fail_input("--seed needs a value");
            try {
                seed = std::stoull(argv[i]);
            } catch (const std::exception&) {
                return fail_input("--seed needs an unsigned integer");
            }
        } else if (a == "--mode") {
            if (++i == argc) return fail_input("--mode needs strict or endpoint");
            std::string m = argv[i];
            if (m == "strict")
                opts.mode_override = HomotopyMode::Strict;
            else if (m == "endpoint")
                opts.mode_override = HomotopyMode::Endpoint;
            else
                return fail_input("--mode needs strict or endpoint");
        } else if (a == "--field") {
            if (++i == argc) return fail_input("--field needs a descriptor");
            opts.field_override = argv[i];
        } else if (!a.empty() && a[0] == '-' && a != "-") {
            return fail_input("unknown flag '" + a + "'");
        } else if (input_path.empty()) {
            input_path = a;
        } else {
            return fail_input("multiple input files given");
        }
    }

    if (sub == "selftest") {
        std::string report = selftest_report(seed);
        bool pass = report.find("result=pass") != std::string::npos;
        if (json) {
            nlohmann::json j;
            j["op"] = "selftest";
            j["seed"] = seed;
            j["report"] = report;
            j["pass"] = pass;
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << report;
        }
        return pass ? 0 : 1;
    }

    std::string text;
    if (input_path.empty() || input_path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(input_path);
        if (!in) return fail_input("cannot open input file '" + input_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }

    try {
        InputDocument doc = parse(text, opts);
        if (!expected_op(sub, doc.op))
            return fail_input("document operation does not match subcommand '" + sub + "'");
        RunResult r = run(doc);
        if (json)
            std::cout << r.json.dump(2) << "\n";
        else
            std::cout << r.text();
        return r.exit_code;
    } catch (const InputError& e) {
        return fail_input(e.what());
    } catch (const DomainError& e) {
        return fail_input(e.what());
    }
}
