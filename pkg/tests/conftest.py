import random

import pytest

# worked 4x4 condensation example
CONDENSE_4X4 = [[-2, -1, -1, -4], [-1, -2, -1, -6], [-1, -1, 2, 4], [2, 1, -3, -8]]


@pytest.fixture
def rng():
    return random.Random(20240611)


def builder_diagrams(dims=(2, 3, 4)):
    """(name, diagram) for every builder the identity suite uses, across dims."""
    from tracediag import builders as bd

    out = []
    add = lambda name, d: out.append((name, d))  # noqa: E731
    for n in dims:
        add(f"strand{n}", bd.strand(n))
        add(f"strandA{n}", bd.strand(n, ("A",)))
        add(f"strandBA{n}", bd.strand(n, ("B", "A")))
        add(f"parallel{n}", bd.parallel(n))
        add(f"swap{n}", bd.swap(n))
        add(f"cap{n}", bd.cap(n))
        add(f"cup{n}", bd.cup(n))
        add(f"loop{n}", bd.free_loops(n))
        add(f"trace{n}", bd.matrix_loop(n))
        add(f"cycle{n}", bd.matrix_cycle(n, ("A", "B")))
        add(f"theta{n}", bd.theta(n))
        add(f"vertex{n}", bd.single_vertex(n))
        add(f"det{n}", bd.determinant_diagram(n))
        add(f"adj{n}", bd.adjugate_diagram(n))
        add(f"invbubble{n}", bd.inverse_bubble(n))
        add(f"mixed{n}", bd.mixed_minor_example(n))
        add(f"eqA{n}", bd.one_node(n, n, lower_labels=("A",)))
        for k in range(n + 1):
            add(f"one{n}_{k}", bd.one_node(n, k))
            add(f"two{n}_{k}", bd.two_node(n, k))
            add(f"cof{n}_{k}", bd.cofactor_diagram(n, k))
            add(f"minor1_{n}_{k}", bd.minor_diagram(n, k, form=1))
            add(f"minor2_{n}_{k}", bd.minor_diagram(n, k, form=2))
            add(f"cutrhs{n}_{k}", bd.cut_paste_rhs(n, k))
            add(f"invrhs{n}_{k}", bd.inverse_form_rhs(n, k))
            if k:
                add(f"bubble{n}_{k}", bd.bubble_jacobi(n, k))
        for i in range(1, n + 1):
            for k in range(1, n // i + 1):
                add(f"gbubble{n}_{i}_{k}", bd.bubble_jacobi_general(n, i, k))
        if n == 3:
            add("binor", bd.binor())
            add("cross", bd.cross_product())
            add("barbell", bd.barbell())
        if n == 2:
            add("triangle", bd.polygon(2, 3))
        if n == 4:
            add("fourvalent", bd.four_valent_example())
    return out


def registry_for(n, seed=0, invertible=True):
    from tracediag import builders as bd
    from tracediag.diagram import MatrixRegistry

    r = random.Random(seed * 100 + n)
    make = bd.random_invertible if invertible else bd.random_matrix
    return MatrixRegistry({"A": make(r, n), "B": make(r, n)})
