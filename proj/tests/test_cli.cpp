#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the command line binary. The test runner exports
// CARPETLAB_CLI with the binary path.

namespace {

std::string cli_path() {
    const char* env = std::getenv("CARPETLAB_CLI");
    return env ? env : "";
}

std::string temp_path(const std::string& name) {
    const char* tmp = std::getenv("TMPDIR");
    return std::string(tmp ? tmp : "/tmp") + "/" + name;
}

int run(const std::string& args, std::string* stdout_text = nullptr) {
    const std::string out_file = temp_path("carpetlab_cli_stdout.txt");
    const std::string command = cli_path() + " " + args + " > " + out_file + " 2>/dev/null";
    const int status = std::system(command.c_str());
    if (stdout_text) {
        std::ifstream in(out_file, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        *stdout_text = buf.str();
    }
    std::remove(out_file.c_str());
    return WEXITSTATUS(status);
}

void write_config(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

const char* kPair1 = "m = 3\nn = 4\ndigits = [[0,0],[0,1],[0,2],[1,0],[1,1],[2,0],[2,1]]\n"
                     "measure.kind = column_uniform\n";

} // namespace

TEST_CASE("cli end to end") {
    if (cli_path().empty()) {
        FAIL("CARPETLAB_CLI not set");
        return;
    }
    const std::string cfg = temp_path("carpetlab_cfg.txt");
    write_config(cfg, kPair1);

    SUBCASE("dims prints the dimension report") {
        std::string text;
        CHECK(run("--config " + cfg + " dims", &text) == 0);
        CHECK(text.find("assouad_dim = 1.792") != std::string::npos);
        CHECK(text.find("box_dim = 1.611") != std::string::npos);
        CHECK(text.find("uniform_fibres = false") != std::string::npos);
    }

    SUBCASE("bad config exits 2 with a field path") {
        const std::string bad = temp_path("carpetlab_bad.txt");
        write_config(bad, "m = 3\nn = 4\ndigits = [[0,9],[0,1]]\nmeasure.kind = mcmullen\n");
        CHECK(run("--config " + bad + " dims") == 2);
        CHECK(run("--config " + temp_path("carpetlab_missing.txt") + " dims") == 2);
        CHECK(run("--config " + cfg) == 2); // missing subcommand
        std::remove(bad.c_str());
    }

    SUBCASE("precondition violations exit 3") {
        // lambda below the theorem range
        CHECK(run("--config " + cfg + " ldp --lambda 1.0 --k-list 50,100") == 3);
        // eps outside (0, gamma-1)
        CHECK(run("--config " + cfg + " ldp --lambda 1.75 --eps 0.9 --k-list 50,100") == 3);
    }

    SUBCASE("ldp exact mode reports slope near the prediction") {
        std::string text;
        const std::string out = temp_path("carpetlab_tail.csv");
        CHECK(run("--config " + cfg + " --out " + out +
                      " ldp --lambda 1.75 --eps 0.2 --k-list 100,200,300",
                  &text) == 0);
        CHECK(text.find("slope") != std::string::npos);
        std::ifstream in(out, std::ios::binary);
        std::string header;
        std::getline(in, header);
        CHECK(header == "k,probability,rate_estimate");
        std::remove(out.c_str());
    }

    SUBCASE("profile and render write csv files") {
        const std::string out = temp_path("carpetlab_profile.csv");
        CHECK(run("--config " + cfg + " --out " + out +
                  " profile --code const:0,0 --R n^-4 --points 64") == 0);
        std::ifstream in(out, std::ios::binary);
        std::string header;
        std::getline(in, header);
        CHECK(header == "r,A,branch");
        std::remove(out.c_str());

        const std::string rout = temp_path("carpetlab_render.csv");
        CHECK(run("--config " + cfg + " --out " + rout + " render --k 2") == 0);
        std::ifstream rin(rout, std::ios::binary);
        std::getline(rin, header);
        CHECK(header == "x,y,width,height");
        std::size_t rows = 0;
        std::string line;
        while (std::getline(rin, line))
            ++rows;
        CHECK(rows == 49); // 7^2
        std::remove(rout.c_str());
    }

    SUBCASE("seeded commands are reproducible") {
        std::string first, second;
        CHECK(run("--config " + cfg + " --seed 99 clt --k 120 --trials 2000", &first) == 0);
        CHECK(run("--config " + cfg + " --seed 99 --threads 4 clt --k 120 --trials 2000",
                  &second) == 0);
        CHECK(first == second);
    }

    SUBCASE("cover-check reports both counts") {
        std::string text;
        CHECK(run("--config " + cfg + " cover-check --code random:5 --R n^-2 --r n^-4", &text) ==
              0);
        CHECK(text.find("formula") != std::string::npos);
        CHECK(text.find("mesh") != std::string::npos);
    }

    std::remove(cfg.c_str());
}
