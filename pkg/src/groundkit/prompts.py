"""Prompt payloads sent to external models.

The first four templates drive the element-description, condensation, and
marker-annotation clients; the planner templates are the message payloads
used when an external planning model produces element descriptions for the
evaluation harnesses. Slots are substituted with str.format-style braces.
"""

__all__ = [
    "DESCRIBE_ELEMENT_PROMPT",
    "CONDENSE_DESCRIPTION_PROMPT",
    "DIRECT_FREE_PROMPT",
    "DIRECT_FUNCTIONAL_PROMPT",
    "GROUNDING_QUESTION_TEMPLATE",
    "WEB_PLANNER_PROMPT",
    "ANDROID_PLANNER_GENERAL_INSTRUCTION",
    "ANDROID_PLANNER_GUIDELINES",
    "ANDROID_PLANNER_HIGH_LEVEL_TEMPLATE",
    "ANDROID_PLANNER_LOW_LEVEL_TEMPLATE",
    "DESKTOP_SCRIPT_PLANNER_PROMPT",
    "ELEMENT_DESCRIPTION_PLANNER_PROMPT",
]

DESCRIBE_ELEMENT_PROMPT = """\
Based on the attached image of a web element, please provide a short description of the web element displayed. The goal is to capture the intuitive and visual appearance of the element. Use the accompanying HTML information as context but focus more on describing what is visually observable. Avoid directly referencing HTML attributes; instead, interpret their possible visual implications if they can be inferred from the image. Be cautious of potential inaccuracies in the HTML attributes and use them to enhance understanding only when they align reasonably with what can be inferred visually.

HTML: {attributes}"""

CONDENSE_DESCRIPTION_PROMPT = """\
Here is a description of an element in a webpage. Using the detailed description provided, create a concise phrase that captures the essential visual and functional characteristics of the web element. The rephrased description should be straightforward, simple and precise enough to allow humans quickly spot this element in a webpage screenshot. Focus on the most prominent visual features and any critical function indicated by the text.

Description: {description}

Leave only your final description in the answer, without any explanation."""

DIRECT_FREE_PROMPT = """\
Here is supposed to be an interactive element (button, link, dropdown, text box, etc.) in the red box pointed by an arrow in the screenshot. Can you find it? Is it visible from the screenshot? Can you write a concise description that is sufficient for humans to locate it from the screenshot? Your response should be a JSON. For example, {"visible": true, "description": "your description here"}."""

DIRECT_FUNCTIONAL_PROMPT = """\
Here is supposed to be an interactive element (button, link, dropdown, text box, etc.) in the red box pointed by an arrow in the screenshot. Can you find it? Is it visible from the screenshot? What unique function does this element enable? Your response should be a JSON. For example, {"visible": true, "action": "subscribe the latest updates"}."""

# Training-sample question; the answer side is a bare "(x, y)" pair.
GROUNDING_QUESTION_TEMPLATE = (
    "In the screenshot, what are the pixel element coordinates corresponding "
    "to {description}?"
)

WEB_PLANNER_PROMPT = """\
You are imitating humans doing web navigation for a task step by step.
At each stage, you can see the webpage like humans by a screenshot and know the previous actions before the current step through recorded history.
You need to decide on the first following action to take.
You can click an element with the mouse, select an option, type text with the keyboard, or scroll down.

You are asked to complete the following task: {task}
Previous Actions: {previous_actions}
The screenshot below shows the webpage you see.

First, observe the current webpage and think through your next step based on the task and previous actions.

To be successful, it is important to follow the following rules:
1. Make sure you understand the task goal to avoid wrong actions.
2. Ensure you carefully examine the current screenshot and issue a valid action based on the observation.
3. You should only issue one action at a time.
4. The element you want to operate with must be fully visible in the screenshot. If it is only partially visible, you need to SCROLL DOWN to see the entire element.
5. The necessary element to achieve the task goal may be located further down the page. If you don't want to interact with any elements, simply select SCROLL DOWN to move to the section below.

Explain the action you want to perform and the element you want to operate with (if applicable). Describe your thought process and reason in 3 sentences.

Finally, conclude your answer using the format below.
Ensure your answer strictly follows the format and requirements provided below, and is clear and precise.
The action, element, and value should each be on three separate lines.

ACTION: Choose an action from {{CLICK, TYPE, SELECT, SCROLL DOWN}}. You must choose one of these four, instead of choosing None.

ELEMENT: Provide a description of the element you want to operate. (If ACTION == SCROLL DOWN, this field should be none.)
It should include the element's identity, type (button, input field, dropdown menu, tab, etc.), and text on it (if applicable).
Ensure your description is both concise and complete, covering all the necessary information and less than 30 words.
If you find identical elements, specify its location and details to differentiate it from others.

VALUE: Provide additional input based on ACTION.
The VALUE means:
If ACTION == TYPE, specify the text to be typed.
If ACTION == SELECT, specify the option to be chosen.
Otherwise, write 'None'."""

ANDROID_PLANNER_GENERAL_INSTRUCTION = """\
You are an agent who can operate an Android phone on behalf of a user.
Based on user's goal/request, you may complete some tasks described in the requests/goals by performing actions (step by step) on the phone.

When given a user request, you will try to complete it step by step. At each step, you will be given the current screenshot and a history of what you have done (in text). Based on these pieces of information and the goal, you must choose to perform one of the action in the following list (action description followed by the JSON format) by outputting the action in the correct JSON format.
- If you think the task has been completed, finish the task by using the status action with complete as goal_status: {{"action_type": "status", "goal_status": "successful"}}
- If you think the task is not feasible (including cases like you don't have enough information or cannot perform some necessary actions), finish by using the 'status' action with infeasible as goal_status: {{"action_type": "status", "goal_status": "infeasible"}}
- Click/tap on an element on the screen, describe the element you want to operate with: {{"action_type": "click", "element": <target_element_description>}}
- Long press on an element on the screen, similar with the click action above: {{"action_type": "long_press", "description": <target_element_description>}}
- Type text into a text field: {{"action_type": "type_text", "text": <text_input>, "element": <target_element_description>}}
- Scroll the screen in one of the four directions: {{"action_type": "scroll", "direction": <up, down, left, right>}}
- Navigate to the home screen: {{"action_type": "navigate_home"}}
- Navigate back: {{"action_type": "navigate_back"}}
- Open an app (nothing will happen if the app is not installed): {{"action_type": "open_app", "app_name": <name>}}
- Wait for the screen to update: {{"action_type": "wait"}}"""

ANDROID_PLANNER_GUIDELINES = """\
Here are some useful guidelines you need to follow:
General:
- Usually there will be multiple ways to complete a task, pick the easiest one. Also when something does not work as expected (due to various reasons), sometimes a simple retry can solve the problem, but if it doesn't (you can see that from the history), SWITCH to other solutions.
- If the desired state is already achieved (e.g., enabling Wi-Fi when it's already on), you can just complete the task.

Action Related:
- Use the 'open_app' action whenever you want to open an app (nothing will happen if the app is not installed), do not use the app drawer to open an app unless all other ways have failed.
- Use the 'type_text' action whenever you want to type something (including password) instead of clicking characters on the keyboard one by one. Sometimes there is some default text in the text field you want to type in, remember to delete them before typing.
- For 'click', 'long_press' and 'type_text', the element you pick must be VISIBLE in the screenshot to interact with it.
- The 'element' field requires a concise yet comprehensive description of the target element in a single sentence, not exceeding 30 words. Include all essential information to uniquely identify the element. If you find identical elements, specify their location and details to differentiate them from others.
- Consider exploring the screen by using the 'scroll' action with different directions to reveal additional content.
- The direction parameter for the 'scroll' action specifies the direction in which the content moves and opposites to swipe; for example, to view content at the bottom, the 'scroll' direction should be set to 'down'.

Text Related Operations:
- Normally to select certain text on the screen: <i> Enter text selection mode by long pressing the area where the text is, then some of the words near the long press point will be selected (highlighted with two pointers indicating the range) and usually a text selection bar will also appear with options like 'copy', 'paste', 'select all', etc. <ii> Select the exact text you need. Usually the text selected from the previous step is NOT the one you want, you need to adjust the range by dragging the two pointers. If you want to select all text in the text field, simply click the 'select all' button in the bar.
- At this point, you don't have the ability to drag something around the screen, so in general you cannot select arbitrary text.
- To delete some text: the most traditional way is to place the cursor at the right place and use the backspace button in the keyboard to delete the characters one by one (can long press the backspace to accelerate if there are many to delete). Another approach is to first select the text you want to delete, then click the backspace button in the keyboard.
- To copy some text: first select the exact text you want to copy, which usually also brings up the text selection bar, then click the 'copy' button in bar.
- To paste text into a text box, first long press the text box, then usually the text selection bar will appear with a 'paste' button in it.
- When typing into a text field, sometimes an auto-complete dropdown list will appear. This usually indicates this is a enum field and you should try to select the best match by clicking the corresponding one in the list."""

ANDROID_PLANNER_HIGH_LEVEL_TEMPLATE = """\
{general_instruction}
The current user goal/request is: {goal}
Here is a history of what you have done so far: {history}

The current raw screenshot is given to you.
{guidelines}

Now output an action from the above list in the correct JSON format, following the reason why you do that. Your answer should look like:
Reason: ...
Action: {{"action_type": ...}}

Your Answer:"""

ANDROID_PLANNER_LOW_LEVEL_TEMPLATE = """\
{general_instruction}
The user's high-level goal/request is: {goal}
The current next step's low-level goal is: {low_level_goal}

The current raw screenshot is given to you.
{guidelines}

Now output an action from the above list in the correct JSON format, following the reason why you do that. Your answer should look like:
Reason: ...
Action: {{"action_type": ...}}

Your Answer:"""

DESKTOP_SCRIPT_PLANNER_PROMPT = """\
You are an excellent robotic process automation agent who needs to generate a PyAutoGUI script for the tasks given to you.
You will receive some examples to help with the format of the script that needs to be generated.

There are some actions that require you to provide an element description for the elements you want to operate on. For the description, follow the requirements below:
Element Description Requirements:
Provide a concise description of the element you want to operate.
It should include the element's identity, type (button, input field, dropdown menu, tab, etc.), and text on it (if have).
If you find identical elements, specify their location and details to differentiate them from others.
Ensure your description is both concise and complete, covering all the necessary information and less than 30 words, and organize it into one sentence.

[IMPORTANT!!] Stick to the format of the output scripts in the example.
[IMPORTANT!!] Use only the functions from the API docs.
[IMPORTANT!!] Follow the output format strictly. Only write the script and nothing else.

Here is the API reference for generating the script:
def click(element=description):
    '''Moves the mouse to the element corresponding to the description and performs a left click.
    Example:
    High Level Goal: Click at the rectangular red button labeled "Next".
    Python script:
    import pyautogui
    pyautogui.click("Rectangular red button labeled "Next" ")
    '''
    pass

def rightClick(element=description):
    '''Moves the mouse to the element corresponding to the description and performs a right click.
    Example:
    High Level Goal: Right-click at link labeled "vacation rentals" under the "housing" section.
    Python script:
    import pyautogui
    pyautogui.rightClick("Link labeled "vacation rentals" under the "housing" section")
    '''
    pass

def doubleClick(element=description):
    '''Moves the mouse to the element corresponding to the description and performs a double click.
    Example:
    High Level Goal: Double-click at folder named "courses".
    Python script:
    import pyautogui
    pyautogui.doubleClick("Folder named "courses" ")
    '''
    pass

def scroll(clicks=amount_to_scroll):
    '''Scrolls the window that has the mouse pointer by float value (amount_to_scroll).
    Example:
    High Level Goal: Scroll screen by 30.
    Python script:
    import pyautogui
    pyautogui.scroll(30)
    '''
    pass

def hscroll(clicks=amount_to_scroll):
    '''Scrolls the window that has the mouse pointer horizontally by float value (amount to scroll).
    Example:
    High Level Goal: Scroll screen horizontally by 30.
    Python script:
    import pyautogui
    pyautogui.hscroll(30)
    '''
    pass

def dragTo(element=description, button=holdButton):
    '''Drags the mouse to the element corresponding to the description with (holdButton) pressed. holdButton can be 'left', 'middle', or 'right'.
    Example:
    High Level Goal: Drag the screen from the current position to recycle bin with the left click of the mouse.
    Python script:
    import pyautogui
    pyautogui.dragTo("Recycle bin with trash can shape", "left")
    '''
    pass

def moveTo(element = description):
    '''Takes the mouse pointer to the element corresponding to the description.
    Example:
    High Level Goal: Hover the mouse pointer to search button.
    Python script:
    import pyautogui
    pyautogui.moveTo("Request appointment button")
    '''
    pass

def write(str=stringType, interval=secs_between_keys):
    '''Writes the string wherever the keyboard cursor is at the function calling time with (secs_between_keys) seconds between characters.
    Example:
    High Level Goal: Write "Hello world" with 0.1 seconds rate.
    Python script:
    import pyautogui
    pyautogui.write("Hello world", 0.1)
    '''
    pass

def press(str=string_to_type):
    '''Simulates pressing a key down and then releasing it up. Sample keys include 'enter', 'shift', arrow keys, 'f1'.
    Example:
    High Level Goal: Press the enter key now.
    Python script:
    import pyautogui
    pyautogui.press("enter")
    '''
    pass

def hotkey(*args = list_of_hotkey):
    '''Keyboard hotkeys like Ctrl-S or Ctrl-Shift-1 can be done by passing a list of key names to hotkey(). Multiple keys can be pressed together with a hotkey.
    Example:
    High Level Goal: Use Ctrl and V to paste from clipboard.
    Python script:
    import pyautogui
    pyautogui.hotkey("ctrl", "v")
    '''
    pass

Here are some examples similar to the tasks you need to complete.
However, these examples use coordinate format for actions like click, rightClick, doubleClick, moveTo, dragTo, instead of element description.
You should only refer to the actions in these examples, and for the output format, stick to the content in the API reference.
For example, do not output "pyautogui.click(100,200)", instead output "pyautogui.click("Gray Tools menu button with a downward arrow in the top right corner") ".
Omit "import pyautogui", do not include any comments or thoughts. Your output should only contain the script itself.
{examples}

Based on the screenshot, generate the PyAutoGUI script for the following task: {task}
You should list all the necessary steps to finish the task, which could involve multiple steps. Also, ensure simplifying your steps as much as possible, avoid dividing a single task into multiple steps if it can be completed in one."""

ELEMENT_DESCRIPTION_PLANNER_PROMPT = """\
You are an excellent agent for mobile, web, and desktop navigation tasks.
Describe the target element for this task based on the provided screenshot:
Task: {task}

Provide a concise description of the element you want to operate.
Ensure your description is both concise and complete, covering all the necessary information in less than 30 words, and organized into one sentence.
If you find identical elements, specify their location and details to differentiate them from others.

Your output should only include the element description itself and follow the requirements.
Do not start with "the target element" or "the element"."""
