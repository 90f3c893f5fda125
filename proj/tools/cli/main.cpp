#include <iostream>

#include "common.hpp"
#include "usertype/error.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Classifies social-media user profiles as male, female or organization"};
    app.require_subcommand(1);

    usertype::cli::register_train(app);
    usertype::cli::register_evaluate(app);
    usertype::cli::register_classify(app);
    usertype::cli::register_report(app);

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the usage error
        return code == 0 ? 0 : 1;
    } catch (const usertype::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const usertype::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
