// Regenerates the bundled sample datasets (data/pima.csv, data/credit-g.csv).
// The files are synthetic replicas that match the public datasets' schema,
// size and class balance so offline runs exercise the same shapes; point the
// manifests at the real downloads for faithful numbers.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fsbench/core/rng.hpp"

namespace {

using fsbench::Rng;

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

std::string format(double v, int decimals) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Force the positive count to `target` by flipping the labels closest to the
/// decision boundary.
void force_positive_count(std::vector<int>& y, const std::vector<double>& p,
                          std::size_t target) {
    std::vector<std::size_t> order(y.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
    std::size_t positives = 0;
    for (const int v : y) positives += static_cast<std::size_t>(v);
    for (const std::size_t i : order) { // ascending p: weakest positives first
        if (positives <= target) break;
        if (y[i] == 1) { y[i] = 0; --positives; }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) { // strongest negatives first
        if (positives >= target) break;
        if (y[*it] == 0) { y[*it] = 1; ++positives; }
    }
}

void write_pima(const std::string& path) {
    const std::size_t n = 768;
    Rng rng(20250301);
    std::vector<double> prob(n);
    std::vector<int> label(n);
    std::vector<std::array<double, 8>> feats(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double age = std::floor(clamp(21.0 + std::fabs(rng.normal()) * 14.0, 21, 81));
        const double preg = std::floor(clamp(std::fabs(rng.normal()) * 2.6 +
                                                 (age - 21.0) / 12.0,
                                             0, 15));
        const double glucose = std::floor(clamp(120.0 + rng.normal() * 30.0, 56, 199));
        const double bp = std::floor(clamp(69.0 + rng.normal() * 12.0, 40, 110));
        const double skin = std::floor(clamp(26.0 + rng.normal() * 9.0, 7, 63));
        const double insulin = std::floor(clamp(118.0 + rng.normal() * 72.0, 14, 540));
        const double bmi = clamp(32.0 + rng.normal() * 6.6, 18.2, 59.8);
        const double pedigree = clamp(0.12 + std::fabs(rng.normal()) * 0.42, 0.078, 2.42);
        feats[i] = {preg, glucose, bp, skin, insulin, bmi, pedigree, age};

        const double z = 0.034 * (glucose - 120.0) + 0.105 * (bmi - 32.0) +
                         0.040 * (age - 33.0) + 1.0 * (pedigree - 0.45) +
                         0.075 * (preg - 3.8) + 0.0035 * (insulin - 118.0) - 0.62;
        prob[i] = sigmoid(z);
        label[i] = rng.next_double() < prob[i] ? 1 : 0;
    }
    force_positive_count(label, prob, 268); // matches the public 500/268 balance

    std::ofstream out(path, std::ios::trunc);
    out << "Pregnancies,Glucose,BloodPressure,SkinThickness,Insulin,BMI,"
           "DiabetesPedigreeFunction,Age,Outcome\n";
    for (std::size_t i = 0; i < n; ++i) {
        const auto& f = feats[i];
        out << format(f[0], 0) << ',' << format(f[1], 0) << ',' << format(f[2], 0) << ','
            << format(f[3], 0) << ',' << format(f[4], 0) << ',' << format(f[5], 1) << ','
            << format(f[6], 3) << ',' << format(f[7], 0) << ',' << label[i] << '\n';
    }
    std::cout << path << ": 768 rows, 8 features\n";
}

struct Categorical {
    std::string name;
    std::vector<std::string> levels;
    std::vector<double> weights; // cumulative weights not required
};

std::size_t pick(Rng& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (const double w : weights) total += w;
    double u = rng.next_double() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        u -= weights[i];
        if (u <= 0.0) return i;
    }
    return weights.size() - 1;
}

void write_credit_g(const std::string& path) {
    const std::size_t n = 1000;
    Rng rng(20250302);

    const std::vector<Categorical> cats = {
        {"checking_status", {"<0", "0<=X<200", ">=200", "no checking"}, {27, 27, 6, 40}},
        {"credit_history",
         {"no credits/all paid", "all paid", "existing paid", "delayed previously",
          "critical/other existing credit"},
         {4, 5, 53, 9, 29}},
        {"purpose",
         {"new car", "used car", "furniture/equipment", "radio/tv", "domestic appliance",
          "repairs", "education", "business", "other"},
         {23, 10, 18, 28, 1, 2, 5, 10, 3}},
        {"savings_status", {"<100", "100<=X<500", "500<=X<1000", ">=1000", "no known savings"},
         {60, 10, 6, 5, 19}},
        {"employment", {"unemployed", "<1", "1<=X<4", "4<=X<7", ">=7"}, {6, 17, 34, 17, 26}},
        {"personal_status",
         {"male div/sep", "female div/dep/mar", "male single", "male mar/wid"},
         {5, 31, 55, 9}},
        {"other_parties", {"none", "co applicant", "guarantor"}, {91, 4, 5}},
        {"property_magnitude", {"real estate", "life insurance", "car", "no known property"},
         {28, 23, 33, 16}},
        {"other_payment_plans", {"bank", "stores", "none"}, {14, 5, 81}},
        {"housing", {"rent", "own", "for free"}, {18, 71, 11}},
        {"job",
         {"unemp/unskilled non res", "unskilled resident", "skilled",
          "high qualif/self emp/mgmt"},
         {2, 20, 63, 15}},
        {"own_telephone", {"none", "yes"}, {60, 40}},
        {"foreign_worker", {"yes", "no"}, {96, 4}},
    };

    std::ofstream out(path, std::ios::trunc);
    out << "checking_status,duration,credit_history,purpose,credit_amount,savings_status,"
           "employment,installment_commitment,personal_status,other_parties,"
           "residence_since,property_magnitude,age,other_payment_plans,housing,"
           "existing_credits,job,num_dependents,own_telephone,foreign_worker,class\n";

    std::vector<std::string> rows(n);
    std::vector<double> prob(n);
    std::vector<int> label(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> level(cats.size());
        for (std::size_t c = 0; c < cats.size(); ++c) level[c] = pick(rng, cats[c].weights);

        const double duration = std::floor(clamp(21.0 + rng.normal() * 12.0, 4, 72));
        const double credit_amount =
            std::floor(clamp(std::exp(7.75 + rng.normal() * 0.72), 250, 18424));
        const double installment = std::floor(clamp(1.0 + rng.next_double() * 4.0, 1, 4));
        const double residence = std::floor(clamp(1.0 + rng.next_double() * 4.0, 1, 4));
        const double age = std::floor(clamp(25.0 + std::fabs(rng.normal()) * 14.0, 19, 75));
        const double existing = std::floor(clamp(1.0 + std::fabs(rng.normal()) * 0.75, 1, 4));
        const double dependents = rng.next_double() < 0.845 ? 1 : 2;

        // "bad" risk latent score
        double z = -1.25;
        z += 0.030 * (duration - 21.0);
        z += 0.00009 * (credit_amount - 3270.0);
        z -= 0.022 * (age - 35.0);
        const auto& checking = cats[0].levels[level[0]];
        if (checking == "<0") z += 0.85;
        else if (checking == "0<=X<200") z += 0.35;
        else if (checking == "no checking") z -= 0.75;
        const auto& history = cats[1].levels[level[1]];
        if (history == "critical/other existing credit") z -= 0.65;
        else if (history == "no credits/all paid" || history == "all paid") z += 0.45;
        const auto& savings = cats[3].levels[level[3]];
        if (savings == "<100") z += 0.30;
        else if (savings == ">=1000" || savings == "no known savings") z -= 0.35;
        if (cats[4].levels[level[4]] == "unemployed") z += 0.25;
        if (cats[9].levels[level[9]] == "rent") z += 0.20;

        prob[i] = sigmoid(z);
        label[i] = rng.next_double() < prob[i] ? 1 : 0;

        std::string row;
        row += cats[0].levels[level[0]] + ',' + format(duration, 0) + ',' +
               cats[1].levels[level[1]] + ',' + cats[2].levels[level[2]] + ',' +
               format(credit_amount, 0) + ',' + cats[3].levels[level[3]] + ',' +
               cats[4].levels[level[4]] + ',' + format(installment, 0) + ',' +
               cats[5].levels[level[5]] + ',' + cats[6].levels[level[6]] + ',' +
               format(residence, 0) + ',' + cats[7].levels[level[7]] + ',' +
               format(age, 0) + ',' + cats[8].levels[level[8]] + ',' +
               cats[9].levels[level[9]] + ',' + format(existing, 0) + ',' +
               cats[10].levels[level[10]] + ',' + format(dependents, 0) + ',' +
               cats[11].levels[level[11]] + ',' + cats[12].levels[level[12]];
        rows[i] = std::move(row);
    }
    force_positive_count(label, prob, 300); // public balance: 700 good / 300 bad

    for (std::size_t i = 0; i < n; ++i)
        out << rows[i] << ',' << (label[i] ? "bad" : "good") << '\n';
    std::cout << path << ": 1000 rows, 20 features\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regenerate the bundled sample datasets"};
    std::string out_dir = "data";
    app.add_option("--out", out_dir, "output directory");
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(out_dir);
    write_pima(out_dir + "/pima.csv");
    write_credit_g(out_dir + "/credit-g.csv");
    return 0;
}
