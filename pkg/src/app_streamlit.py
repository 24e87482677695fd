"""
Singing Pronunciation Analysis Streamlit Application

A web interface over AnalysisService: upload transcripts and lexicons, inspect
the confidence and error tables, and download them as CSV or JSON. The Logs
section shows the tail of recent log files.
"""

import os

import streamlit as st
from dotenv import load_dotenv

from AnalysisSchema import AdaptationReportModel, ErrorReportModel, ScoreReportModel
from AnalysisService import AnalysisService, ServiceConfig
from errors import PronunciationAnalysisError
from ErrorScoring import parse_transcripts
from formatters import category_matrix_csv, confidence_table_csv, error_reports_csv, format_adaptation_summary
from Lexicon import OovPolicy, parse_lexicon, serialize_lexicon
from LexiconAdapter import DEFAULT_DROP_FINALS, AdaptationConfig, AdaptationMode
from logger import get_log_file_paths, get_logger, read_log_file

# Load environment variables
load_dotenv()

logger = get_logger("streamlit")

# Configure Streamlit page
st.set_page_config(
    page_title="Singing Pronunciation Analysis",
    page_icon="🎤",
    layout="wide",
    initial_sidebar_state="expanded"
)

# App styling
st.markdown("""
<style>
    .main-header {
        font-size: 2.5rem;
        color: #4a86e8;
        margin-bottom: 1rem;
    }
    div.stButton > button {
        width: 100%;
        border-radius: 5px;
        border: 1px solid #ddd;
        padding: 5px 10px;
        text-align: left;
        background-color: #f8f9fa;
    }
    div.stButton > button[kind="primary"] {
        background-color: #4a86e8;
        color: white;
        border-color: #3a76d8;
        font-weight: 500;
    }
</style>
""", unsafe_allow_html=True)

sections = [
    {"name": "Analyze", "description": "Phoneme confidence scores, confusion sets and the category confusion matrix"},
    {"name": "Adapt", "description": "Add consonant-drop and vowel-extension variants to a lexicon"},
    {"name": "Score", "description": "Word and character error rates with S/I/D breakdowns"},
    {"name": "Logs", "description": "Recent log files"},
]

if 'selected_section' not in st.session_state:
    st.session_state.selected_section = sections[0]["name"]

for section in sections:
    is_active = st.session_state.selected_section == section["name"]
    if st.sidebar.button(section["name"], key=f"toggle_{section['name']}", use_container_width=True,
                         type="primary" if is_active else "secondary"):
        st.session_state.selected_section = section["name"]
        st.rerun()

selected = next(section for section in sections if section["name"] == st.session_state.selected_section)
st.sidebar.markdown("---")
st.sidebar.markdown(selected["description"])

st.markdown("<h1 class='main-header'>Singing Pronunciation Analysis</h1>", unsafe_allow_html=True)


def uploaded_text(label: str, key: str):
    uploaded = st.file_uploader(label, key=key)
    return uploaded.getvalue().decode("utf-8") if uploaded is not None else None


def get_service(oov: str = OovPolicy.SKIP.value) -> AnalysisService:
    return AnalysisService(config=ServiceConfig.from_env(oov_policy=OovPolicy(oov)))


def show_analyze():
    hyp_text = uploaded_text("Recognized phoneme transcripts (or word transcripts with a lexicon)", "analyze_hyp")
    ref_text = uploaded_text("Reference phoneme transcripts", "analyze_ref")
    lexicon_text = uploaded_text("Lexicon for phonemizing word transcripts (optional)", "analyze_lexicon")
    col1, col2 = st.columns(2)
    with col1:
        topn = st.number_input("Confusion set size", min_value=1, max_value=10,
                               value=int(os.getenv("PRON_TOPN", "3")))
    with col2:
        oov = st.selectbox("OOV policy", [OovPolicy.SKIP.value, OovPolicy.STRICT.value])

    if not (hyp_text and ref_text) or not st.button("Run analysis"):
        return

    service = get_service(oov)
    hyps = parse_transcripts(hyp_text)
    if lexicon_text:
        hyps = service.phonemize_utterances(hyps, parse_lexicon(lexicon_text))
    result = service.analyze(hyps, parse_transcripts(ref_text), int(topn), suggest_finals=4).payload

    st.subheader(f"Phoneme confidence ({result.utterances} utterances)")
    st.dataframe([
        {"phoneme": row.phoneme, "category": row.category.value, "c_q": row.confidence, "rank": row.rank,
         "C": row.counts.correct, "S": row.counts.substitutions, "I": row.counts.insertions,
         "D": row.counts.deletions, "confusions": " ".join(row.confusion_set)}
        for row in result.rows
    ], use_container_width=True)
    st.download_button("Download confidence table (CSV)", confidence_table_csv(result.rows),
                       file_name="confidence.csv", mime="text/csv")

    st.subheader("Category confusion matrix")
    st.dataframe([
        {"truth": truth, **{label: float(value) for label, value in zip(result.matrix.labels, result.matrix.values[i])}}
        for i, truth in enumerate(result.matrix.labels)
    ], use_container_width=True)
    st.download_button("Download category matrix (CSV)", category_matrix_csv(result.matrix),
                       file_name="confidence.matrix.csv", mime="text/csv")

    if result.suggested_drop_finals:
        st.info(f"Lowest-confidence consonants: {','.join(result.suggested_drop_finals)}")


def show_adapt():
    lexicon_text = uploaded_text("CMU-format lexicon", "adapt_lexicon")
    col1, col2, col3 = st.columns(3)
    with col1:
        mode = st.selectbox("Mode", [mode.value for mode in AdaptationMode], index=2)
    with col2:
        drop_finals = st.text_input("Drop finals", ",".join(sorted(DEFAULT_DROP_FINALS)))
    with col3:
        max_vowel_repeat = st.number_input("Max vowel repeat", min_value=1, max_value=5, value=2)
    cross_compose = st.checkbox("Cross-compose in l3", value=True)

    if not lexicon_text or not st.button("Adapt lexicon"):
        return

    service = get_service()
    lexicon = parse_lexicon(lexicon_text, service.phone_set)
    cfg = AdaptationConfig(
        drop_finals=frozenset(service.phone_set.normalize_symbol(p) for p in drop_finals.split(",") if p.strip()),
        max_vowel_repeat=int(max_vowel_repeat),
        mode=AdaptationMode(mode),
        cross_compose=cross_compose,
    )
    result = service.adapt(lexicon, cfg).payload

    st.success(format_adaptation_summary(result.summary))
    adapted_text = serialize_lexicon(result.lexicon, tag_variants=True)
    st.code(adapted_text, language=None)
    st.download_button("Download lexicon", serialize_lexicon(result.lexicon), file_name="adapted.dict")
    report = AdaptationReportModel.from_adaptation(cfg, result.summary, result.lexicon)
    st.download_button("Download JSON", report.model_dump_json(indent=2), file_name="adapted.json",
                       mime="application/json")


def show_score():
    hyp_text = uploaded_text("Recognized word transcripts", "score_hyp")
    ref_text = uploaded_text("Reference word transcripts", "score_ref")
    lexicon_text = uploaded_text("Lexicon (optional, enables the drop-final subset)", "score_lexicon")
    ref_phones_text = uploaded_text("Reference phoneme transcripts (optional, enables vowel reports)",
                                    "score_ref_phones")
    include_insertions = not st.checkbox("Exclude insertions")

    if not (hyp_text and ref_text) or not st.button("Score"):
        return

    service = get_service()
    lexicon = parse_lexicon(lexicon_text, service.phone_set) if lexicon_text else None
    ref_phones = parse_transcripts(ref_phones_text) if ref_phones_text and lexicon is not None else None
    result = service.score(parse_transcripts(hyp_text), parse_transcripts(ref_text), lexicon,
                           ref_phones=ref_phones, include_insertions=include_insertions).payload

    models = [ErrorReportModel.from_report(name, report) for name, report in result.reports.items()]
    st.dataframe([model.model_dump(exclude={"oov_words"}) for model in models], use_container_width=True)
    st.download_button("Download CSV", error_reports_csv(result.reports), file_name="scores.csv", mime="text/csv")
    st.download_button("Download JSON",
                       ScoreReportModel(include_insertions=include_insertions, reports=models).model_dump_json(indent=2),
                       file_name="scores.json", mime="application/json")


def show_logs():
    log_files_available = get_log_file_paths(max_count=20)
    if not log_files_available:
        st.info("No log files found. Check that the logs directory exists in the project folder.")
        return

    log_file_options = {os.path.basename(f): f for f in log_files_available}
    col1, col2 = st.columns([5, 2])
    with col1:
        selected_log = st.selectbox("Select log file", options=list(log_file_options.keys()))
    with col2:
        lines_to_show = st.number_input("Number of lines", min_value=10, max_value=1000, value=100, step=10)

    log_content = read_log_file(log_file_options[selected_log], max_lines=int(lines_to_show))
    st.code(log_content, language='text', line_numbers=False)
    st.download_button(f"Download {selected_log}", log_content, file_name=selected_log)


handlers = {"Analyze": show_analyze, "Adapt": show_adapt, "Score": show_score, "Logs": show_logs}

try:
    handlers[selected["name"]]()
except (PronunciationAnalysisError, ValueError) as e:
    logger.error(f"{selected['name']} failed: {e}")
    st.error(f"Error: {e}")
