"""Data entities and boundary models."""

from models.schemas import *
