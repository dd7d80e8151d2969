package shapes

type Point struct {
	X int
}

type Legacy struct {
	Y int
}

type Shape interface {
	Area() int
}

type Old interface {
	Gone()
}

func (p Point) Norm() int {
	return p.X
}

func removed() int {
	return 0
}
