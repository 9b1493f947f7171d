#include <string>

#include "CLI11.hpp"
#include "qdf/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"qdf: quantum and classical deflection functions from S-matrix elements"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qdf::cli::version));

    qdf::cli::RunConfig cfg;
    int jmin = 0, jmax = 0, omega_prime = 0;
    double smooth_j = 0.0, smooth_theta = 0.0;
    unsigned long long seed = 0;
    std::size_t grid_points = 0;
    std::string unwrap = "two-sided";

    for (const auto& name : qdf::cli::commands())
    {
        auto* sub = app.add_subcommand(name);
        sub->add_option("input", cfg.inputs, "S-matrix, trajectory or model file")->required();
        sub->add_option("-o,--out", cfg.out, "output file (default stdout)");
        if (name == "synth")
        {
            sub->add_option("--seed", seed, "override the model seed");
            continue;
        }
        sub->add_option("--grid-deg", cfg.grid_deg, "theta step in degrees")->capture_default_str();
        sub->add_option("--grid-points", grid_points, "number of theta points, endpoints included");
        sub->add_option("--jmin", jmin, "lowest J written");
        sub->add_option("--jmax", jmax, "highest J written");
        sub->add_flag("--no-sin-theta", cfg.no_sin_theta, "divide maps by sin(theta)");
        if (name.rfind("qct-", 0) == 0)
        {
            sub->add_option("--method", cfg.method, "legendre or gaussian")->capture_default_str();
            sub->add_option("--order-m", cfg.order_m, "Legendre order in theta")->capture_default_str();
            sub->add_option("--order-n", cfg.order_n, "Legendre order in J")->capture_default_str();
            sub->add_option("--smooth-j", smooth_j, "kernel width in J");
            sub->add_option("--smooth-theta-deg", smooth_theta, "kernel width in degrees");
            sub->add_flag("--renormalize-boundary", cfg.renormalize_boundary, "unit kernel mass inside the domain");
            continue;
        }
        sub->add_option("--omega-prime", omega_prime, "final helicity");
        sub->add_option("--omega", cfg.omega, "initial helicity")->capture_default_str();
        sub->add_flag("--smooth", cfg.smooth, "Gaussian smoothing with default widths");
        sub->add_option("--smooth-j", smooth_j, "smoothing width in J");
        sub->add_option("--smooth-theta-deg", smooth_theta, "smoothing width in degrees");
        sub->add_option("--unwrap", unwrap, "two-sided or one-sided")
            ->check(CLI::IsMember({"two-sided", "one-sided"}))
            ->capture_default_str();
    }

    CLI11_PARSE(app, argc, argv);

    auto* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    auto given = [&](const char* opt) { return sub->get_option_no_throw(opt) && sub->count(opt) > 0; };
    if (given("--jmin"))
        cfg.jmin = jmin;
    if (given("--jmax"))
        cfg.jmax = jmax;
    if (given("--omega-prime"))
        cfg.omega_prime = omega_prime;
    if (given("--smooth-j"))
        cfg.smooth_j = smooth_j;
    if (given("--smooth-theta-deg"))
        cfg.smooth_theta_deg = smooth_theta;
    if (given("--grid-points"))
        cfg.grid_points = grid_points;
    if (given("--seed"))
        cfg.seed = seed;
    cfg.unwrap = unwrap == "one-sided" ? qdf::UnwrapMode::one_sided : qdf::UnwrapMode::two_sided;

    return qdf::cli::run(cfg);
}
