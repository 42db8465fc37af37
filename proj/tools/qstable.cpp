#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "qstable/cli.hpp"

using namespace qstable;

int main(int argc, char** argv) {
    CLI::App app{"Exact counts of absolutely stable quiver representations over finite fields"};
    app.require_subcommand(1);

    std::string quiver, theta, slope = "0", primes = "2,3", format = "json";
    long max_height = 4, q1_order = 2;
    std::uint64_t budget = std::uint64_t{1} << 24;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    bool corrupt = false;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"a-series", "a_alpha(q) for every alpha of the slope cone"},
        {"r-series", "r_alpha(q) = #R^ss_alpha / #GL_alpha as rational functions"},
        {"s-count", "s_{r alpha, r}(q): stable classes with endomorphism field of degree r"},
        {"f-expand", "(q-1)-expansion of f with positivity, necklace and degree reports"},
        {"expand", "alias of f-expand"},
        {"verify", "compare t, r, a, s against brute-force counts over F_p"},
        {"necklaces", "linear (q-1)-coefficients of a_d against primitive necklaces"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--quiver", quiver, "quiver JSON file")->required();
        sub->add_option("--theta", theta, "stability as a CSV of integers");
        sub->add_option("--slope", slope, "target slope P/Q")->capture_default_str();
        sub->add_option("--max-height", max_height, "truncation height")->capture_default_str();
        sub->add_option("--primes", primes, "primes for verify, CSV")->capture_default_str();
        sub->add_option("--q1-order", q1_order, "order of the (q-1)-expansion")->capture_default_str();
        sub->add_option("--format", format, "json, latex or text")->capture_default_str();
        sub->add_option("--budget", budget, "oracle point budget")->capture_default_str();
        sub->add_option("--threads", threads, "oracle worker threads");
        sub->add_flag("--corrupt-table", corrupt, "perturb one a_alpha before verifying")->group("");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::invalid_input;
    }

    cli::RunConfig config;
    try {
        config.quiver_file = quiver;
        if (!theta.empty()) config.theta = cli::parse_csv(theta);
        config.slope = io::parse_rational(slope);
        config.max_height = max_height;
        config.primes = cli::parse_csv(primes);
        config.q1_order = q1_order;
        config.format = cli::parse_format(format);
        config.budget = budget;
        config.threads = threads;
        config.corrupt_table = corrupt;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::invalid_input;
    }

    const cli::Outcome o = cli::run(app.get_subcommands().front()->get_name(), config);
    std::cout << o.out;
    std::cerr << o.err;
    return o.code;
}
