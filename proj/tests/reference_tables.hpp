#pragma once

// Reference mesh data: n, cells, edges, vertices, h, and the global DOF counts
// for orders 2..5 (0 where no order-5 run exists).

namespace ncvem_tests {

struct TableRow {
  int n;
  int cells;
  int edges;
  int vertices;
  double h;
  long long ndof[4];
};

inline constexpr TableRow kCrissCross[9] = {
    {0, 100, 160, 61, 2.00e-1, {221, 541, 961, 1481}},
    {1, 400, 620, 221, 1.00e-1, {841, 2081, 3721, 5761}},
    {2, 1600, 2440, 841, 5.00e-2, {3281, 8161, 14641, 22721}},
    {3, 3600, 5460, 1861, 3.33e-2, {7321, 18241, 32761, 50881}},
    {4, 6400, 9680, 3281, 2.50e-2, {12961, 32321, 58081, 90241}},
    {5, 10000, 15100, 5101, 2.00e-2, {20201, 50401, 90601, 0}},
    {6, 14400, 21720, 7321, 1.67e-2, {29041, 72481, 130321, 0}},
    {7, 19600, 29540, 9941, 1.43e-2, {39481, 98561, 177241, 0}},
    {8, 25600, 38560, 12961, 1.25e-2, {51521, 128641, 231361, 0}},
};
inline constexpr TableRow kHexagonal[9] = {
    {0, 36, 125, 90, 3.28e-1, {215, 465, 751, 1073}},
    {1, 121, 400, 280, 1.85e-1, {680, 1480, 2401, 3443}},
    {2, 441, 1400, 960, 9.69e-2, {2360, 5160, 8401, 12083}},
    {3, 961, 3000, 2040, 6.49e-2, {5040, 11040, 18001, 25923}},
    {4, 1681, 5200, 3520, 4.89e-2, {8720, 19120, 31201, 44963}},
    {5, 2601, 8000, 5400, 3.91e-2, {13400, 29400, 48001, 0}},
    {6, 3721, 11400, 7680, 3.26e-2, {19080, 41880, 68401, 0}},
    {7, 5041, 15400, 10360, 2.80e-2, {25760, 56560, 92401, 0}},
    {8, 6561, 20000, 13440, 2.45e-2, {33440, 73440, 120001, 0}},
};
inline constexpr TableRow kOctagonal[9] = {
    {0, 25, 120, 96, 2.91e-1, {216, 456, 721, 1011}},
    {1, 100, 440, 341, 1.46e-1, {781, 1661, 2641, 3721}},
    {2, 400, 1680, 1281, 7.29e-2, {2961, 6321, 10081, 14241}},
    {3, 900, 3720, 2821, 4.86e-2, {6541, 13981, 22321, 31561}},
    {4, 1600, 6560, 4961, 3.64e-2, {11521, 24641, 39361, 55681}},
    {5, 2500, 10200, 7701, 2.92e-2, {17901, 38301, 61201, 0}},
    {6, 3600, 14640, 11041, 2.43e-2, {25681, 54961, 87841, 0}},
    {7, 4900, 19880, 14981, 2.08e-2, {34861, 74621, 119281, 0}},
    {8, 6400, 25920, 19521, 1.82e-2, {45441, 97281, 155521, 0}},
};
inline constexpr TableRow kRandomQuad[9] = {
    {0, 25, 60, 36, 3.311e-1, {96, 216, 361, 531}},
    {1, 100, 220, 121, 1.865e-1, {341, 781, 1321, 1961}},
    {2, 400, 840, 441, 9.412e-2, {1281, 2961, 5041, 7521}},
    {3, 900, 1860, 961, 6.130e-2, {2821, 6541, 11161, 16681}},
    {4, 1600, 3280, 1681, 4.693e-2, {4961, 11521, 19681, 29441}},
    {5, 2500, 5100, 2601, 3.808e-2, {7701, 17901, 30601, 0}},
    {6, 3600, 7320, 3721, 3.167e-2, {11041, 25681, 43921, 0}},
    {7, 4900, 9940, 5041, 2.751e-2, {14981, 34861, 59641, 0}},
    {8, 6400, 12960, 6561, 2.389e-2, {19521, 45441, 77761, 0}},
};

}  // namespace ncvem_tests
