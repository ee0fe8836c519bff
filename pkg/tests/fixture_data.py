"""Deterministic collections backing the replay scenarios.

Object wording is tuned against the hashed-token embedding so that the
rank-sensitive scenarios (cake third for the dairy/gluten question, the
three red fruits inside the match candidate pool) hold exactly. Edit with
care and re-run the generator afterwards.
"""

from curation_engine.objects import CuratedObject, Relationship
from curation_engine.store import Collection, build_index


def _rel(predicate, target):
    return Relationship(predicate=predicate, target=target)


def _specimens():
    return [
        CuratedObject(
            id="SpecimenFromOrganism",
            label="specimen from organism",
            definition="A specimen that is derived from a whole organism or organism part.",
        ),
        CuratedObject(
            id="BloodSpecimen",
            label="blood specimen",
            definition="A specimen that is derived from blood.",
            relationships=[_rel("subclassOf", "SpecimenFromOrganism")],
        ),
        CuratedObject(
            id="TissueSpecimen",
            label="tissue specimen",
            definition="A specimen that is derived from a tissue sample.",
            relationships=[_rel("subclassOf", "SpecimenFromOrganism")],
        ),
        CuratedObject(
            id="HairSpecimen",
            label="hair specimen",
            definition="A specimen that is derived from hair.",
            relationships=[_rel("subclassOf", "SpecimenFromOrganism")],
        ),
        CuratedObject(
            id="SalivaSpecimen",
            label="saliva specimen",
            definition="A specimen that is derived from saliva.",
            relationships=[_rel("subclassOf", "SpecimenFromOrganism")],
        ),
        CuratedObject(
            id="UrineSpecimen",
            label="urine specimen",
            definition="A specimen that is derived from urine.",
            relationships=[_rel("subclassOf", "SpecimenFromOrganism")],
        ),
    ]


def _environments():
    return [
        CuratedObject(
            id="Stormwater",
            label="stormwater",
            definition="Water which originates from precipitation and accumulates as runoff.",
        ),
        CuratedObject(
            id="SuburbanBiome",
            label="suburban biome",
            definition="An anthropogenic biome associated with lower-density development around cities.",
        ),
        CuratedObject(
            id="AreaOfResidentialDevelopment",
            label="area of residential development",
            definition="An area where houses and supporting infrastructure predominate.",
        ),
        CuratedObject(
            id="UrbanBiome",
            label="urban biome",
            definition="An anthropogenic biome associated with dense human settlement.",
        ),
        CuratedObject(
            id="Wetland",
            label="wetland",
            definition="An area saturated by surface water or groundwater.",
        ),
        CuratedObject(
            id="RooftopGarden",
            label="rooftop garden",
            definition="A vegetated area established on a building roof.",
        ),
    ]


def _phenotypes():
    return [
        CuratedObject(
            id="Neuralgia",
            label="neuralgia",
            definition="Pain in the distribution of a nerve or nerves.",
        ),
        CuratedObject(
            id="ChestPain",
            label="chest pain",
            definition="Pain felt in the chest region.",
            relationships=[_rel("subclassOf", "Pain")],
        ),
        CuratedObject(
            id="Paresthesia",
            label="paresthesia",
            definition="Abnormal sensations such as tingling, pricking, or numbness.",
        ),
        CuratedObject(
            id="AbdominalPain",
            label="abdominal pain",
            definition="Pain felt in the abdomen.",
            relationships=[_rel("subclassOf", "Pain")],
        ),
        CuratedObject(
            id="Pain",
            label="pain",
            definition="An unpleasant sensory and emotional experience.",
        ),
        CuratedObject(
            id="BurningSensation",
            label="burning sensation",
            definition="A sensation of heat or burning without an external source.",
        ),
    ]


def _medical_actions():
    cvs_definition = (
        "A prenatal test in which a sample of chorionic villi is removed from "
        "the placenta for testing. The sample can be taken through the cervix "
        "(transcervical) or the abdominal wall (transabdominal). Mayo Clinic"
    )
    return [
        CuratedObject(
            id="ChorionicVillusSampling",
            label="chorionic villus sampling",
            definition=cvs_definition,
            relationships=[
                _rel("subclassOf", "PrenatalGeneticTesting"),
                _rel("subclassOf", "ClinicalBiopsyBySite"),
                _rel("subclassOf", "WholeBodyExamination"),
                _rel("subclassOf", "TherapeuticProcedureOfOrganismSubstance"),
                _rel("subclassOf", "TherapeuticProcedureOfOrgan"),
                _rel("subclassOf", "DiagnosticProcedureOfBodySubstance"),
                _rel("subclassOf", "DiagnosticProcedureOfOrgan"),
            ],
            original_id="MAXO:0000536",
        ),
        CuratedObject(
            id="MedicalDeviceImplantation",
            label="medical device implantation",
            definition="A medical action in which a device is implanted in the body.",
        ),
        CuratedObject(
            id="PrenatalGeneticTesting",
            label="prenatal genetic testing",
            definition="Genetic testing performed before birth.",
        ),
        CuratedObject(
            id="Amniocentesis",
            label="amniocentesis",
            definition="A procedure sampling amniotic fluid for prenatal testing.",
            relationships=[_rel("subclassOf", "PrenatalGeneticTesting")],
        ),
        CuratedObject(
            id="StentPlacement",
            label="stent placement",
            definition="A medical action in which a stent is placed in a vessel or duct.",
            relationships=[_rel("subclassOf", "MedicalDeviceImplantation")],
        ),
        CuratedObject(
            id="PacemakerImplantation",
            label="pacemaker implantation",
            definition="Implantation of a cardiac pacemaker device.",
            relationships=[_rel("subclassOf", "MedicalDeviceImplantation")],
        ),
    ]


def _breeds():
    return [
        CuratedObject(
            id="FishBreed",
            label="fish breed",
            definition="A breed of fish maintained for a particular purpose.",
        ),
        CuratedObject(
            id="RainbowTroutBreed",
            label="Rainbow trout breed",
            definition="A breed of the rainbow trout, Oncorhynchus mykiss.",
            relationships=[_rel("subclassOf", "FishBreed")],
        ),
        CuratedObject(
            id="CattleBreed",
            label="cattle breed",
            definition="A breed of domestic cattle.",
        ),
        CuratedObject(
            id="DogBreed",
            label="dog breed",
            definition="A breed of the domestic dog.",
        ),
        CuratedObject(
            id="ChickenBreed",
            label="chicken breed",
            definition="A breed of domestic chicken.",
        ),
        CuratedObject(
            id="HorseBreed",
            label="horse breed",
            definition="A breed of the domestic horse.",
        ),
    ]


def _diseases():
    return [
        CuratedObject(
            id="Carcinoma",
            label="carcinoma",
            definition="A cancer arising from epithelial cells.",
        ),
        CuratedObject(
            id="TongueNeoplasm",
            label="tongue neoplasm",
            definition="A neoplasm involving the tongue.",
            relationships=[_rel("subclassOf", "OralCavityNeoplasm")],
        ),
        CuratedObject(
            id="OralCavityCarcinoma",
            label="oral cavity carcinoma",
            definition="A carcinoma involving the oral cavity.",
            relationships=[_rel("subclassOf", "Carcinoma")],
        ),
        CuratedObject(
            id="BladderSquamousCellCarcinoma",
            label="bladder squamous cell carcinoma",
            definition="A squamous cell carcinoma involving the bladder.",
            relationships=[_rel("subclassOf", "Carcinoma")],
        ),
        CuratedObject(
            id="OralCavityNeoplasm",
            label="oral cavity neoplasm",
            definition="A neoplasm involving the oral cavity.",
        ),
        CuratedObject(
            id="LarynxCarcinoma",
            label="larynx carcinoma",
            definition="A carcinoma involving the larynx.",
            relationships=[_rel("subclassOf", "Carcinoma")],
        ),
    ]


def _chat_foods():
    # ranks for "What food products may contain dairy ingredients and gluten?"
    # are part of the replay contract: cake must sit exactly third
    return [
        CuratedObject(
            id="GlutenFoodSource",
            label="gluten food source",
            definition="Food products that may contain gluten ingredients such as wheat flour.",
        ),
        CuratedObject(
            id="DairyFoodProduct",
            label="dairy food product",
            definition="Food products that may contain dairy ingredients including milk and butter.",
        ),
        CuratedObject(
            id="CakeFoodProduct",
            label="cake food product",
            definition="A food that is usually sweet and often baked with flour, eggs, butter, and milk.",
            relationships=[_rel("subclassOf", "BakeryFoodProduct")],
            original_id="FOODON:00001278",
        ),
        CuratedObject(
            id="AppleJuice",
            label="apple juice",
            definition="A beverage pressed from apples.",
        ),
        CuratedObject(
            id="SalmonFillet",
            label="salmon fillet",
            definition="A cut of fish prepared for cooking.",
        ),
        CuratedObject(
            id="RiceGrain",
            label="rice grain",
            definition="A cereal grain consumed worldwide.",
        ),
    ]


def _match_foods():
    # twelve objects; the bottom two must fall outside the default ten-strong
    # candidate pool for "round red fruit with many seeds in it"
    return [
        CuratedObject(
            id="RedRaspberry",
            label="red raspberry",
            definition="A round red fruit with many small seeds held in drupelets.",
            original_id="FOODON:00003729",
        ),
        CuratedObject(
            id="SweetRedBellPepper",
            label="sweet red bell pepper",
            definition="A red fruit vegetable with many seeds inside a hollow body.",
            original_id="FOODON:00003485",
        ),
        CuratedObject(
            id="RedCurrant",
            label="red currant",
            definition="A small round red fruit borne in clusters.",
            original_id="FOODON:00003766",
        ),
        CuratedObject(
            id="Strawberry",
            label="strawberry",
            definition="A red fruit with seeds on its surface.",
        ),
        CuratedObject(
            id="Tomato",
            label="tomato",
            definition="A round red fruit used as a vegetable.",
        ),
        CuratedObject(
            id="Pomegranate",
            label="pomegranate",
            definition="A round fruit filled with many seeds.",
        ),
        CuratedObject(
            id="Watermelon",
            label="watermelon",
            definition="A large round fruit with red flesh and seeds.",
        ),
        CuratedObject(
            id="Cherry",
            label="cherry",
            definition="A small round red fruit with a single stone.",
        ),
        CuratedObject(
            id="Cranberry",
            label="cranberry",
            definition="A small red fruit with a tart taste.",
        ),
        CuratedObject(
            id="Grape",
            label="grape",
            definition="A small round fruit growing in bunches.",
        ),
        CuratedObject(
            id="GreenCabbage",
            label="green cabbage",
            definition="A leafy vegetable formed of tight layers.",
        ),
        CuratedObject(
            id="OatFlake",
            label="oat flake",
            definition="A rolled cereal used for porridge.",
        ),
    ]


def _assays():
    # exactly ten objects so every one of them lands in the candidate pool,
    # whatever the ranking of a query that shares no tokens with any entry
    return [
        CuratedObject(
            id="Liver",
            label="liver",
            definition="An organ that detoxifies metabolites and produces bile.",
            original_id="UBERON:0002107",
        ),
        CuratedObject(
            id="MassSpectrometryAssay",
            label="mass spectrometry assay",
            definition="An assay that identifies analytes by mass to charge ratio.",
        ),
        CuratedObject(
            id="EnzymeAssay",
            label="enzyme assay",
            definition="An assay measuring enzymatic activity.",
        ),
        CuratedObject(
            id="Microscope",
            label="microscope",
            definition="An instrument for viewing small objects.",
        ),
        CuratedObject(
            id="Centrifuge",
            label="centrifuge",
            definition="An instrument that separates samples by spinning.",
        ),
        CuratedObject(
            id="BloodDrawProcedure",
            label="blood draw procedure",
            definition="A specimen collection procedure for venous blood.",
        ),
        CuratedObject(
            id="CellCulture",
            label="cell culture",
            definition="The process of growing cells under controlled conditions.",
        ),
        CuratedObject(
            id="SequencingAssay",
            label="sequencing assay",
            definition="An assay determining nucleotide order.",
        ),
        CuratedObject(
            id="Questionnaire",
            label="questionnaire",
            definition="An instrument consisting of a series of questions.",
        ),
        CuratedObject(
            id="Incubator",
            label="incubator",
            definition="A device maintaining controlled temperature for samples.",
        ),
    ]


BUILDERS = {
    "obi_specimen": _specimens,
    "envo": _environments,
    "hpo": _phenotypes,
    "maxo": _medical_actions,
    "vbo": _breeds,
    "mondo": _diseases,
    "foodon_chat": _chat_foods,
    "foodon_match": _match_foods,
    "obi_match": _assays,
}


def build_fixture_collection(name: str, embedder) -> Collection:
    """A freshly indexed copy of one of the named fixture collections."""
    coll = Collection(name)
    coll.upsert(BUILDERS[name]())
    build_index(coll, embedder)
    return coll
