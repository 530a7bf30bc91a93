// logmonoid: command-line front end.
//
// Exit codes: 0 when the analysis ran (negative verdicts included), 2 for
// invalid input, 1 for internal errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "logmonoid/io.hpp"

namespace {

using logmonoid::io::Json;

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kBadInput = 2;

struct Options {
    std::string file;
    std::string out;
    std::string sub;
    std::string presentation;
    bool strict_contact = false;
    bool json = false;
    std::size_t bound = 0;
};

void emit(const Json& j, bool as_json, const std::string& text)
{
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int run_analyze(const Options& o)
{
    auto g = logmonoid::io::graph_from_json(logmonoid::io::read_json_file(o.file), o.strict_contact);
    Json report = logmonoid::io::analyze_graph(g, {o.strict_contact, o.bound});
    emit(report, o.json, logmonoid::io::render_report(report));
    return kOk;
}

int run_report(const Options& o)
{
    auto g = logmonoid::io::graph_from_json(logmonoid::io::read_json_file(o.file), o.strict_contact);
    Json report = logmonoid::io::analyze_graph(g, {o.strict_contact, o.bound});
    std::ofstream out(o.out);
    if (!out) {
        std::cerr << "error: cannot write " << o.out << "\n";
        return kBadInput;
    }
    out << report.dump(2) << "\n";
    std::cout << "wrote " << o.out << ": " << report["verdict"]["summary"].get<std::string>() << "\n";
    return kOk;
}

int run_monoid(const Options& o)
{
    auto p = logmonoid::parse_presentation(o.presentation);
    Json r = logmonoid::io::monoid_command(o.sub, p);
    emit(r, o.json, logmonoid::io::render_monoid(o.sub, r));
    return kOk;
}

int run_slb(const Options& o)
{
    auto doc = logmonoid::io::slb_from_json(logmonoid::io::read_json_file(o.file));
    Json r = logmonoid::io::check_slb(doc, o.bound);
    std::string text = r["verdict"].get<std::string>() + "\n";
    if (r["consistent"].get<bool>()) {
        text += "witness:";
        for (const auto& u : r["witness"])
            text += " " + logmonoid::io::unit_from_json(u).to_string();
        text += "\n";
    } else {
        text += r["failure"].get<std::string>() + " failure: " + r["reason"].get<std::string>() + "\n";
        text += "certificate: " + r["certificate"].dump() + "\n";
    }
    if (r.contains("symplectic")) {
        const Json& s = r["symplectic"];
        text += s["ok"].get<bool>() ? "symplectic log map\n"
                                    : "not a symplectic log map: " + s["diagnostics"].get<std::string>() + "\n";
        if (!r["saturation_data"].is_null())
            text += "saturation data: " + std::to_string(r["saturation_data"].size()) + "\n";
    }
    emit(r, o.json, text);
    return kOk;
}

int run_canon(const Options& o)
{
    auto g = logmonoid::io::graph_from_json(logmonoid::io::read_json_file(o.file), o.strict_contact);
    std::cout << logmonoid::io::serialize_graph(g);
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact monoid and log curve computations"};
    app.require_subcommand(1);
    Options o;

    auto bound_opt = [&](CLI::App* c) {
        c->add_option("--bound", o.bound, "coefficient-sum bound for membership searches")->check(CLI::PositiveNumber);
    };

    auto* analyze = app.add_subcommand("analyze", "run every stage on a graph document");
    analyze->add_option("file", o.file, "graph JSON")->required();
    analyze->add_flag("--strict-contact", o.strict_contact, "require mu = 0 off the degeneracy sets");
    analyze->add_flag("--json", o.json, "machine-readable output");
    bound_opt(analyze);

    auto* monoid = app.add_subcommand("monoid", "operations on an inline presentation");
    monoid->add_option("sub", o.sub, "snf | gp | sharp | saturate | dual | ddual")
        ->required()
        ->check(CLI::IsMember({"snf", "gp", "sharp", "saturate", "dual", "ddual"}));
    monoid->add_option("presentation", o.presentation, "e.g. \"e1, e2 | 4e1 = 6e2\"")->required();
    monoid->add_flag("--json", o.json, "machine-readable output");

    auto* slb = app.add_subcommand("slb", "consistency of an slb presentation");
    slb->add_option("file", o.file, "slb JSON")->required();
    slb->add_flag("--json", o.json, "machine-readable output");
    bound_opt(slb);

    auto* report = app.add_subcommand("report", "write the JSON report of a graph");
    report->add_option("file", o.file, "graph JSON")->required();
    report->add_option("-o,--output", o.out, "output path")->required();
    report->add_flag("--strict-contact", o.strict_contact, "require mu = 0 off the degeneracy sets");
    bound_opt(report);

    auto* canon = app.add_subcommand("canon", "print the canonical form of a graph document");
    canon->add_option("file", o.file, "graph JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*analyze)
            return run_analyze(o);
        if (*monoid)
            return run_monoid(o);
        if (*slb)
            return run_slb(o);
        if (*report)
            return run_report(o);
        if (*canon)
            return run_canon(o);
    } catch (const logmonoid::PreconditionError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kBadInput;
    } catch (const logmonoid::InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
