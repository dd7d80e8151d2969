package shapes

type Point struct {
	X int
	Z int
}

type Shape interface {
	Area() int
	Perimeter() int
}

type Sized interface {
	Size() int
}

func (p *Point) Norm() int {
	return p.X + p.Z
}

type Vec struct {
	N int
}

func added() int {
	return 1
}
