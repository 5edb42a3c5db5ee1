import pytest

from charp import FieldConfig, parse_form, parse_rational


def field(p, *names, e=1):
    return FieldConfig(p, e, tuple(names))


def rf(text, config):
    return parse_rational(text, config)


def form(text, config):
    return parse_form(text, config)


@pytest.fixture
def f2xy():
    return field(2, "x", "y")


@pytest.fixture
def f3x():
    return field(3, "x")
