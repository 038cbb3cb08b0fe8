#include <cstdio>
int main() { std::puts("levypde"); return 0; }
