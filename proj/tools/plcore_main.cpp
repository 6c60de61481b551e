#include <cstdio>
int main() { std::puts("plcore"); return 0; }
