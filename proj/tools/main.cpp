#include <cstdio>

int main() {
    std::puts("deltaiss cli placeholder");
    return 0;
}
