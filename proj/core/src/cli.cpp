#include "lseries/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lseries/serialization.hpp"

namespace lseries::cli {

namespace {

json parse_json_or_file(const std::string& text, const char* what) {
    std::string trimmed = text;
    auto first = trimmed.find_first_not_of(" \t");
    if (first != std::string::npos && (trimmed[first] == '[' || trimmed[first] == '{'))
        return json::parse(trimmed);
    std::ifstream in(text);
    if (!in) throw std::invalid_argument(std::string(what) + ": cannot open file '" + text + "'");
    json j;
    in >> j;
    return j;
}

CoefficientSet parse_lambda(const std::string& text) {
    return coefficient_set_from_json(parse_json_or_file(text, "lambda"));
}

cplx parse_complex(const std::string& text) { return complex_from_json(json::parse(text)); }

UnitAngle parse_zeta(const std::string& text) {
    std::string body = text;
    if (body.rfind("turns:", 0) == 0) body = body.substr(6);
    return angle_from_json(json(body));
}

// disk:cre,cim,r or wedge:re_lo,re_hi,arg_center,half_angle, ';'-separated;
// or a JSON region file/literal.
RegionSpec parse_region(const std::string& text, const UnitAngle& zeta) {
    auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
        return region_from_json(parse_json_or_file(text, "region"));
    if (text.find(':') == std::string::npos && text.find(';') == std::string::npos) {
        std::ifstream in(text);
        if (in) {
            json j;
            in >> j;
            return region_from_json(j);
        }
        throw std::invalid_argument("region: cannot parse '" + text + "'");
    }
    std::vector<RegionPiece> pieces;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        auto colon = item.find(':');
        std::string kind = item.substr(0, colon);
        std::vector<double> nums;
        std::stringstream vs(item.substr(colon + 1));
        std::string tok;
        while (std::getline(vs, tok, ',')) nums.push_back(std::stod(tok));
        if (kind == "disk" && nums.size() == 3)
            pieces.push_back(Disk{{nums[0], nums[1]}, nums[2]});
        else if (kind == "wedge" && nums.size() == 4)
            pieces.push_back(Wedge{nums[0], nums[1], nums[2], nums[3]});
        else
            throw std::invalid_argument("region: bad piece '" + item + "'");
    }
    return RegionSpec(std::move(pieces), zeta);
}

engines::PrefixConstraint parse_prefix(const std::string& text) {
    engines::PrefixConstraint p;
    if (text.empty()) return p;
    for (const auto& v : parse_json_or_file(text, "prefix")) p.values.push_back(complex_from_json(v));
    return p;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

struct HypothesisExit {
    std::string reason;
};

int cmd_approximate(const std::string& lambda_s, const std::string& zeta_s,
                    const std::string& region_s, const std::string& target_s, double eps,
                    const std::string& prefix_s, std::uint64_t seed, const std::string& theorem,
                    bool diagnostics, std::ostream& out, std::ostream& err) {
    CoefficientSet lambda = parse_lambda(lambda_s);
    UnitAngle zeta = parse_zeta(zeta_s);
    RegionSpec region = region_s.empty() ? RegionSpec::default_disk(zeta)
                                         : parse_region(region_s, zeta);
    if (!(region.accumulation_point() == zeta))
        throw std::invalid_argument("approximate: --zeta and region accumulation point disagree");
    cplx target = parse_complex(target_s);
    engines::PrefixConstraint prefix = parse_prefix(prefix_s);
    engines::EngineParams params;
    params.seed = seed;

    engines::EngineResult res = [&] {
        if (theorem == "1") return engines::approximate_generic(lambda, region, prefix, target, eps, params);
        if (theorem == "2")
            return engines::approximate_near_minus_one(lambda, region, prefix, target, eps, params);
        if (theorem == "3")
            return engines::approximate_near_plus_one(lambda, region, prefix, target, eps, params);
        return engines::approximate(lambda, region, prefix, target, eps, params);
    }();

    emit(out, to_json(res.certificate));
    if (diagnostics) {
        json d{{"branch", res.diagnostics.branch}};
        if (res.diagnostics.power) d["power"] = *res.diagnostics.power;
        if (res.diagnostics.epsilon0 > 0) d["epsilon0"] = res.diagnostics.epsilon0;
        if (res.diagnostics.annulus_hi > 0)
            d["annulus"] = json::array({res.diagnostics.annulus_lo, res.diagnostics.annulus_hi});
        if (res.diagnostics.net_epsilon > 0) d["net_epsilon"] = res.diagnostics.net_epsilon;
        emit(err, d);
    }
    return 0;
}

int cmd_verify(const std::string& cert_file, const std::string& lambda_s,
               const std::string& zeta_s, const std::string& region_s, std::ostream& out) {
    CoefficientSet lambda = parse_lambda(lambda_s);
    UnitAngle zeta = parse_zeta(zeta_s);
    RegionSpec region = region_s.empty() ? RegionSpec::default_disk(zeta)
                                         : parse_region(region_s, zeta);
    json j;
    if (cert_file == "-") {
        std::cin >> j;
    } else {
        std::ifstream in(cert_file);
        if (!in) throw std::invalid_argument("verify: cannot open '" + cert_file + "'");
        in >> j;
    }
    Certificate cert = certificate_from_json(j);
    auto rep = engines::verify_certificate(lambda, cert, region);
    emit(out, to_json(rep));
    return rep.valid ? 0 : 2;
}

int cmd_classify(const std::string& lambda_s, std::ostream& out) {
    auto cls = geometry::classify_lambda(parse_lambda(lambda_s));
    emit(out, to_json(cls));
    return 0;
}

int cmd_wedge(int k, const std::string& side, std::ostream& out) {
    auto s = side == "plus" ? cex::WedgeSide::AtPlusOne : cex::WedgeSide::AtMinusOne;
    emit(out, to_json(cex::build_wedge(k, s)));
    return 0;
}

int cmd_check_evasion(const std::string& lambda_s, int k, const std::string& side,
                      std::uint64_t trials, std::uint64_t z_samples, std::uint64_t prefix_len,
                      std::uint64_t seed, const std::string& csv_path, std::ostream& out) {
    CoefficientSet lambda = parse_lambda(lambda_s);
    bool imag_side;
    if (side == "minus")
        imag_side = true;
    else if (side == "plus")
        imag_side = false;
    else {
        // auto: real sets evade upward at -1, half-plane sets downward at +1
        imag_side = true;
        for (cplx v : lambda.elements())
            if (std::fabs(v.imag()) > 1e-12 * std::max(1.0, lambda.sup_modulus())) {
                imag_side = false;
                break;
            }
    }
    auto wedge = cex::build_wedge(k, imag_side ? cex::WedgeSide::AtMinusOne
                                               : cex::WedgeSide::AtPlusOne);
    auto rep = imag_side
                   ? cex::imag_bound_check(lambda, wedge, trials, z_samples, prefix_len, seed)
                   : cex::real_bound_check(lambda, wedge, trials, z_samples, prefix_len, seed);
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw std::invalid_argument("check-evasion: cannot open csv path");
        cex::write_extremes_csv(rep, csv);
    }
    emit(out, evasion_report_to_json(rep, imag_side));
    return rep.pass ? 0 : 1;
}

int cmd_oracle(const std::string& lambda_s, const std::string& tau_s, const std::string& target_s,
               std::uint32_t length, std::ostream& out) {
    auto res = oracle::best_prefix_error(parse_lambda(lambda_s), parse_complex(tau_s),
                                         parse_complex(target_s), length);
    emit(out, to_json(res));
    return 0;
}

int cmd_sample(const std::string& lambda_s, const std::string& zeta_s, const std::string& region_s,
               std::uint64_t trials, std::uint64_t prefix_len, const std::string& grid_s,
               std::uint64_t seed, const std::string& csv_path, std::ostream& out) {
    CoefficientSet lambda = parse_lambda(lambda_s);
    UnitAngle zeta = parse_zeta(zeta_s);
    RegionSpec region = region_s.empty() ? RegionSpec::default_disk(zeta)
                                         : parse_region(region_s, zeta);
    sampler::GridSpec grid;
    if (!grid_s.empty()) {
        std::stringstream vs(grid_s.substr(grid_s.find(':') + 1));
        std::vector<double> nums;
        std::string tok;
        while (std::getline(vs, tok, ',')) nums.push_back(std::stod(tok));
        if (nums.size() < 3) throw std::invalid_argument("grid: want disk:cre,cim,r[,resolution]");
        grid.disk = Disk{{nums[0], nums[1]}, nums[2]};
        if (nums.size() > 3) grid.resolution = static_cast<std::uint32_t>(nums[3]);
    }
    auto cloud = sampler::sample_image(lambda, region, prefix_len, trials, grid, seed);
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw std::invalid_argument("sample: cannot open csv path");
        sampler::write_csv(cloud, csv);
    }
    emit(out, coverage_summary(cloud));
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"restricted-coefficient power series: approximation certificates and checks"};
    app.require_subcommand(1);

    std::string lambda_s, zeta_s, region_s, target_s, prefix_s, tau_s, cert_file, csv_path;
    std::string theorem = "auto", side = "auto", grid_s;
    double eps = 0.1;
    int k = 2;
    std::uint64_t seed = 0, trials = 10000, z_samples = 100, prefix_len = 512, sample_trials = 1000;
    std::uint32_t length = 8;
    bool diagnostics = false;

    auto* ap = app.add_subcommand("approximate", "emit an approximation certificate");
    ap->add_option("--lambda", lambda_s, "coefficient set, JSON [[re,im],...] or file")->required();
    ap->add_option("--zeta", zeta_s, "accumulation point, turns:<p/q|float>")->required();
    ap->add_option("--target", target_s, "target value [re,im]")->required();
    ap->add_option("--eps", eps, "accuracy")->required();
    ap->add_option("--region", region_s, "disk:...;wedge:... or JSON (default disk at zeta)");
    ap->add_option("--prefix", prefix_s, "pinned leading coefficients, JSON [[re,im],...]");
    ap->add_option("--seed", seed, "seed (engines are deterministic)");
    ap->add_option("--theorem", theorem, "auto|1|2|3")
        ->check(CLI::IsMember({"auto", "1", "2", "3"}));
    ap->add_flag("--diagnostics", diagnostics, "engine diagnostics on stderr");

    auto* cl = app.add_subcommand("classify", "line / half-plane / spanning classification");
    cl->add_option("--lambda", lambda_s)->required();

    auto* wg = app.add_subcommand("wedge", "build a counterexample wedge");
    wg->add_option("--k", k, "wedge index, k >= 2")->required();
    wg->add_option("--side", side, "minus|plus")->check(CLI::IsMember({"minus", "plus"}));

    auto* ev = app.add_subcommand("check-evasion", "sampled half-plane evasion bound");
    ev->add_option("--lambda", lambda_s)->required();
    ev->add_option("--k", k)->required();
    ev->add_option("--side", side, "minus|plus|auto");
    ev->add_option("--trials", trials);
    ev->add_option("--z-samples", z_samples);
    ev->add_option("--prefix-len", prefix_len);
    ev->add_option("--seed", seed);
    ev->add_option("--csv", csv_path, "write per-point extrema CSV here");

    auto* orc = app.add_subcommand("oracle", "exhaustive best prefix approximation");
    orc->add_option("--lambda", lambda_s)->required();
    orc->add_option("--tau", tau_s, "[re,im], |tau|<1")->required();
    orc->add_option("--target", target_s)->required();
    orc->add_option("--length", length, "prefix length L");

    auto* sm = app.add_subcommand("sample", "random image cloud and grid coverage");
    sm->add_option("--lambda", lambda_s)->required();
    sm->add_option("--zeta", zeta_s)->required();
    sm->add_option("--region", region_s);
    sm->add_option("--trials", sample_trials);
    sm->add_option("--prefix-len", prefix_len);
    sm->add_option("--grid", grid_s, "disk:cre,cim,r[,resolution]");
    sm->add_option("--seed", seed);
    sm->add_option("--csv", csv_path, "write per-sample CSV here");

    auto* vf = app.add_subcommand("verify", "re-check a certificate file");
    vf->add_option("--certificate-file", cert_file, "path or - for stdin")->required();
    vf->add_option("--lambda", lambda_s)->required();
    vf->add_option("--zeta", zeta_s)->required();
    vf->add_option("--region", region_s);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << app.help() << "\nerror: " << e.what() << "\n";
        return 64;
    }

    try {
        if (ap->parsed())
            return cmd_approximate(lambda_s, zeta_s, region_s, target_s, eps, prefix_s, seed,
                                   theorem, diagnostics, out, err);
        if (cl->parsed()) return cmd_classify(lambda_s, out);
        if (wg->parsed()) return cmd_wedge(k, side == "plus" ? "plus" : "minus", out);
        if (ev->parsed())
            return cmd_check_evasion(lambda_s, k, side, trials, z_samples, prefix_len, seed,
                                     csv_path, out);
        if (orc->parsed()) return cmd_oracle(lambda_s, tau_s, target_s, length, out);
        if (sm->parsed())
            return cmd_sample(lambda_s, zeta_s, region_s, sample_trials, prefix_len, grid_s, seed,
                              csv_path, out);
        if (vf->parsed()) return cmd_verify(cert_file, lambda_s, zeta_s, region_s, out);
        err << "error: no subcommand\n";
        return 64;
    } catch (const HypothesisError& e) {
        emit(out, json{{"error", {{"kind", "hypothesis"}, {"reason", e.what()}}}});
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace lseries::cli
