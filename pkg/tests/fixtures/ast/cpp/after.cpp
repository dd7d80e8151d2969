namespace geo {

class Shape {
public:
    int area() { return 1; }
    int sides() { return 3; }
};

struct Pair {
    int a;
    int b;
};

enum class Color { Red, Green, Blue };

int scale(int x) { return x * 2; }

}

namespace fresh {
class New {};
struct Item { int v; };
enum Mode { Fast };
int helper() { return 2; }
}
