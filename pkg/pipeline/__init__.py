"""Five-stage pipeline, sequential reference interpreter and run traces."""

from pipeline.core import PipelineSimulator
from pipeline.reference import ReferenceInterpreter, ReferenceResult
from pipeline.trace import RunTrace

__all__ = ["PipelineSimulator", "ReferenceInterpreter", "ReferenceResult", "RunTrace"]
