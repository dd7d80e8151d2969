struct point {
    int x;
    int z;
};

enum color {
    RED,
    GREEN,
    BLUE
};

enum mode { FAST };

int area(int w, int h) {
    return w * h * 1;
}

struct vec {
    int n;
};

int *make(void) {
    return 0;
}
