"""Prompt template text.

Header lines, instructions and judge rubrics are reproduced verbatim; tests
assert on exact substrings.
"""

HEADERS: dict[str, str] = {
    "finqa": "Read the following passage and then write Python code to answer the question:",
    "tatqa": "Read the following passage and then write Python code to answer the question:",
    "convfinqa": (
        "Read the following text and table, and then answer the last question "
        "by writing a Python code:"
    ),
}

EXEMPLAR_HEADERS: dict[str, str] = {
    "finqa": "Read the following passage and then write python code to answer the question",
    "tatqa": "Read the following passage and then write python code to answer the question",
    "convfinqa": (
        "Read the following text and table, and then answer the last question "
        "in a series of questions:"
    ),
}

HINT_LINE = "Answer Hint: Strictly perform the following calculations to arrive at the answer:: {program}"

ZERO_SHOT_INSTRUCTION = (
    "First, identify entities required to answer the question. Extract the identified "
    "entities and store in python variables. Then perform calculations with the entities "
    'and strictly store the answer to the python variable "ans". Python code must end after '
    'the variable "ans" is defined. Comments must begin with character "#".'
)

FINETUNE_INSTRUCTION = (
    'The final answer must be stored in the Python variable "ans" and comments must begin '
    'with character "#".'
)

CONCEPT_JUDGE_INSTRUCTION = (
    "You are an AI assistant. You will be given the definition of an evaluation metric for "
    "assessing the financial concept understanding demonstrated by the provided student code. "
    "The assessment is based on the provided question and the gold code that provides the true "
    "concept. Please note that the student code can be in a very different format and the "
    "format difference should be ignored. Please ignore the values of the required entities in "
    "your assessment. Entity extraction is a different skill that is not relevant to assess "
    "concept understanding. Your job is to compute an accurate evaluation score using the "
    "provided evaluation metric. Make sure to explain your answer.\n"
    "Concept understanding measures how well the student model code demonstrates an "
    "understanding of the financial concept illustrated by the gold code. Consider whether the "
    "student code is trying to compute the required entity and is it talking about entities "
    "relevant to the required computation. Given the student code, the gold code and the "
    "question, score the concept understanding demonstrated by the student code between one to "
    "five stars using the following rating scale:\n"
    "One star: the student code demonstrates no understanding of the concept to be calculated\n"
    "Two stars: the student code demonstrates limited understanding of the required concept\n"
    "Three stars: the student code demonstrates partial understanding of the required concept\n"
    "Four stars: the student code mostly demonstrates the understanding of the concept "
    "illustrated by the gold code but there are minor issues\n"
    "Five stars: the student code demonstrates perfect understanding of the concept "
    "illustrated by the gold code.\n"
    "This rating value should always be an integer between 1 and 5. So the rating produced "
    "should be 1 or 2 or 3 or 4 or 5. The result should strictly be written in the following "
    "format: {'Explanation': [Think step by step and explain the reason in detail for the "
    "rating. Step 1: Analyse the gold code, Step 2: Analyse the student code, Step 3: Evaluate "
    "the student code by comparing with the gold code. Step 4: Provide the final rating with a "
    "detailed justification.], 'Star rating': [int]}"
)

ENTITY_JUDGE_INSTRUCTION = (
    "Based on the question and the gold answer, determine if the student has correctly "
    "extracted all the relevant entities. Strictly ensure that the entity values are exactly "
    "matching."
)

ENTITY_VERDICT_INSTRUCTION = (
    'End your response with a final line that reads exactly "Verdict: CORRECT" if the student '
    'has correctly extracted all the relevant entities, or "Verdict: INCORRECT" otherwise.'
)

JUDGE_PAYLOAD = "Question: {question}\nGold code: {gold_code}\nStudent generated code: {student_code}"
